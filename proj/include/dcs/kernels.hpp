#pragma once

#include <functional>
#include <vector>

#include "dcs/common.hpp"
#include "dcs/quadrature.hpp"

namespace dcs {

/// Row-major table of sampled family members, one row per state.
struct FamilyTable {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<cplx> data;

    FamilyTable() = default;
    FamilyTable(int rows, int cols)
        : n_rows(rows), n_cols(cols), data(size_t(rows) * size_t(cols)) {}

    cplx* row(int j) { return data.data() + size_t(j) * size_t(n_cols); }
    const cplx* row(int j) const { return data.data() + size_t(j) * size_t(n_cols); }
};

// The kernels below come in pairs: the plain name is parallelized with OpenMP
// when it is available, the _ref twin is the serial reference. Both produce
// bitwise identical results for any thread count; parallel loops run over
// independent outputs (or whole quadrature rings) so no reduction order ever
// depends on scheduling.

/// c[j] = sum_i w[i] conj(F[j,i]) f[i]
std::vector<cplx> batch_inner(const FamilyTable& F, const std::vector<double>& w,
                              const std::vector<cplx>& f);
std::vector<cplx> batch_inner_ref(const FamilyTable& F, const std::vector<double>& w,
                                  const std::vector<cplx>& f);

/// out[i] = sum_j coef[j] F[j,i]
std::vector<cplx> synthesize(const FamilyTable& F, const std::vector<cplx>& coef);
std::vector<cplx> synthesize_ref(const FamilyTable& F, const std::vector<cplx>& coef);

/// G[m,k] = sum_i w[i] conj(A[m,i]) B[k,i], row-major n_rows(A) x n_rows(B)
std::vector<cplx> gram_table(const FamilyTable& A, const FamilyTable& B,
                             const std::vector<double>& w);
std::vector<cplx> gram_table_ref(const FamilyTable& A, const FamilyTable& B,
                                 const std::vector<double>& w);

/// sum over plane nodes of w(node) * eval(node), accumulated ring by ring
cplx plane_sum(const PlaneQuadrature& q, const std::function<cplx(int)>& eval);
cplx plane_sum_ref(const PlaneQuadrature& q, const std::function<cplx(int)>& eval);

/// M[m,n] = sum over plane nodes of w(node) a_m(node) conj(b_n(node));
/// eval fills the ra entries of a and rb entries of b for one node.
using PlaneNodeEval = std::function<void(int node, cplx* a, cplx* b)>;
std::vector<cplx> plane_matrix_sum(const PlaneQuadrature& q, int ra, int rb,
                                   const PlaneNodeEval& eval);
std::vector<cplx> plane_matrix_sum_ref(const PlaneQuadrature& q, int ra, int rb,
                                       const PlaneNodeEval& eval);

}  // namespace dcs
