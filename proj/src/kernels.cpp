#include "dcs/kernels.hpp"

#include <stdexcept>

namespace dcs {

namespace {

void check_table_args(const FamilyTable& F, size_t w_size, size_t f_size) {
    if (w_size != size_t(F.n_cols) || f_size != size_t(F.n_cols)) {
        throw domain_error("kernel: table width, weights, and sample sizes disagree");
    }
}

cplx row_dot(const cplx* row, const std::vector<double>& w, const std::vector<cplx>& f, int n) {
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += w[size_t(i)] * std::conj(row[i]) * f[size_t(i)];
    }
    return acc;
}

}  // namespace

std::vector<cplx> batch_inner_ref(const FamilyTable& F, const std::vector<double>& w,
                                  const std::vector<cplx>& f) {
    check_table_args(F, w.size(), f.size());
    std::vector<cplx> c(size_t(F.n_rows));
    for (int j = 0; j < F.n_rows; ++j) {
        c[size_t(j)] = row_dot(F.row(j), w, f, F.n_cols);
    }
    return c;
}

std::vector<cplx> batch_inner(const FamilyTable& F, const std::vector<double>& w,
                              const std::vector<cplx>& f) {
    check_table_args(F, w.size(), f.size());
    std::vector<cplx> c(size_t(F.n_rows));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < F.n_rows; ++j) {
        c[size_t(j)] = row_dot(F.row(j), w, f, F.n_cols);
    }
    return c;
}

std::vector<cplx> synthesize_ref(const FamilyTable& F, const std::vector<cplx>& coef) {
    if (coef.size() != size_t(F.n_rows)) {
        throw domain_error("kernel: coefficient count does not match table rows");
    }
    std::vector<cplx> out(size_t(F.n_cols), cplx{});
    for (int i = 0; i < F.n_cols; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < F.n_rows; ++j) {
            acc += coef[size_t(j)] * F.row(j)[i];
        }
        out[size_t(i)] = acc;
    }
    return out;
}

std::vector<cplx> synthesize(const FamilyTable& F, const std::vector<cplx>& coef) {
    if (coef.size() != size_t(F.n_rows)) {
        throw domain_error("kernel: coefficient count does not match table rows");
    }
    std::vector<cplx> out(size_t(F.n_cols), cplx{});
#pragma omp parallel for schedule(static)
    for (int i = 0; i < F.n_cols; ++i) {
        cplx acc = 0.0;
        for (int j = 0; j < F.n_rows; ++j) {
            acc += coef[size_t(j)] * F.row(j)[i];
        }
        out[size_t(i)] = acc;
    }
    return out;
}

std::vector<cplx> gram_table_ref(const FamilyTable& A, const FamilyTable& B,
                                 const std::vector<double>& w) {
    if (A.n_cols != B.n_cols || w.size() != size_t(A.n_cols)) {
        throw domain_error("kernel: gram operands must share one grid");
    }
    std::vector<cplx> G(size_t(A.n_rows) * size_t(B.n_rows));
    for (int m = 0; m < A.n_rows; ++m) {
        for (int k = 0; k < B.n_rows; ++k) {
            const cplx* ra = A.row(m);
            const cplx* rb = B.row(k);
            cplx acc = 0.0;
            for (int i = 0; i < A.n_cols; ++i) {
                acc += w[size_t(i)] * std::conj(ra[i]) * rb[i];
            }
            G[size_t(m) * size_t(B.n_rows) + size_t(k)] = acc;
        }
    }
    return G;
}

std::vector<cplx> gram_table(const FamilyTable& A, const FamilyTable& B,
                             const std::vector<double>& w) {
    if (A.n_cols != B.n_cols || w.size() != size_t(A.n_cols)) {
        throw domain_error("kernel: gram operands must share one grid");
    }
    std::vector<cplx> G(size_t(A.n_rows) * size_t(B.n_rows));
#pragma omp parallel for collapse(2) schedule(static)
    for (int m = 0; m < A.n_rows; ++m) {
        for (int k = 0; k < B.n_rows; ++k) {
            const cplx* ra = A.row(m);
            const cplx* rb = B.row(k);
            cplx acc = 0.0;
            for (int i = 0; i < A.n_cols; ++i) {
                acc += w[size_t(i)] * std::conj(ra[i]) * rb[i];
            }
            G[size_t(m) * size_t(B.n_rows) + size_t(k)] = acc;
        }
    }
    return G;
}

namespace {

cplx ring_partial(const PlaneQuadrature& q, const std::function<cplx(int)>& eval, int ring) {
    const int len = q.ring_length();
    const int base = ring * len;
    cplx acc = 0.0;
    for (int j = 0; j < len; ++j) {
        const int node = base + j;
        acc += q.ws[size_t(node)] * eval(node);
    }
    return acc;
}

}  // namespace

cplx plane_sum_ref(const PlaneQuadrature& q, const std::function<cplx(int)>& eval) {
    cplx acc = 0.0;
    for (int r = 0; r < q.n_rings(); ++r) {
        acc += ring_partial(q, eval, r);
    }
    return acc;
}

cplx plane_sum(const PlaneQuadrature& q, const std::function<cplx(int)>& eval) {
    std::vector<cplx> partial(size_t(q.n_rings()), cplx{});
#pragma omp parallel for schedule(static)
    for (int r = 0; r < q.n_rings(); ++r) {
        partial[size_t(r)] = ring_partial(q, eval, r);
    }
    cplx acc = 0.0;
    for (int r = 0; r < q.n_rings(); ++r) {
        acc += partial[size_t(r)];
    }
    return acc;
}

namespace {

void ring_matrix_partial(const PlaneQuadrature& q, int ra, int rb, const PlaneNodeEval& eval,
                         int ring, std::vector<cplx>& a, std::vector<cplx>& b, cplx* out) {
    const int len = q.ring_length();
    const int base = ring * len;
    for (int j = 0; j < len; ++j) {
        const int node = base + j;
        const double w = q.ws[size_t(node)];
        if (w == 0.0) {
            continue;
        }
        eval(node, a.data(), b.data());
        for (int m = 0; m < ra; ++m) {
            const cplx wa = w * a[size_t(m)];
            cplx* row = out + size_t(m) * size_t(rb);
            for (int n = 0; n < rb; ++n) {
                row[n] += wa * std::conj(b[size_t(n)]);
            }
        }
    }
}

}  // namespace

std::vector<cplx> plane_matrix_sum_ref(const PlaneQuadrature& q, int ra, int rb,
                                       const PlaneNodeEval& eval) {
    std::vector<cplx> M(size_t(ra) * size_t(rb), cplx{});
    std::vector<cplx> a(static_cast<size_t>(ra));
    std::vector<cplx> b(static_cast<size_t>(rb));
    std::vector<cplx> ring(M.size());
    for (int r = 0; r < q.n_rings(); ++r) {
        std::fill(ring.begin(), ring.end(), cplx{});
        ring_matrix_partial(q, ra, rb, eval, r, a, b, ring.data());
        for (size_t k = 0; k < M.size(); ++k) {
            M[k] += ring[k];
        }
    }
    return M;
}

std::vector<cplx> plane_matrix_sum(const PlaneQuadrature& q, int ra, int rb,
                                   const PlaneNodeEval& eval) {
    const size_t sz = size_t(ra) * size_t(rb);
    std::vector<std::vector<cplx>> partial(size_t(q.n_rings()));
#pragma omp parallel
    {
        std::vector<cplx> a(static_cast<size_t>(ra));
        std::vector<cplx> b(static_cast<size_t>(rb));
#pragma omp for schedule(static)
        for (int r = 0; r < q.n_rings(); ++r) {
            partial[size_t(r)].assign(sz, cplx{});
            ring_matrix_partial(q, ra, rb, eval, r, a, b, partial[size_t(r)].data());
        }
    }
    std::vector<cplx> M(sz, cplx{});
    for (int r = 0; r < q.n_rings(); ++r) {
        for (size_t k = 0; k < sz; ++k) {
            M[k] += partial[size_t(r)][k];
        }
    }
    return M;
}

}  // namespace dcs
