// Timing comparison of the OpenMP kernels against their serial reference
// twins, on workloads shaped like the real verification suite. Each pair is
// also checked for bitwise-identical output, which is the contract that
// makes the parallel versions safe to substitute anywhere.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dcs/darboux.hpp"
#include "dcs/freeparticle.hpp"
#include "dcs/kernels.hpp"
#include "dcs/quadrature.hpp"

using namespace dcs;

namespace {

double best_of(int repeats, const std::function<void()>& work) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        work();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        best = std::min(best, s);
    }
    return best;
}

bool bitwise_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real() || a[i].imag() != b[i].imag()) {
            return false;
        }
    }
    return true;
}

void report(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-18s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel,
                identical ? "bitwise-identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both columns run serially\n\n");
#endif

    const Grid1D grid = make_grid(-20.0, 20.0, 2001);
    const MomentumGrid pg = make_momentum_grid(12.0, 1025);
    const PlaneQuadrature plane = make_plane_quadrature(7.0, 700, 128);
    const std::vector<double> wx = simpson_weights(grid);
    const int repeats = 5;

    // plane-wave analysis of one state: 1025 x 2001 inner products
    const FamilyTable waves = plane_wave_table(pg, grid, 0.0);
    const SampledState psi0 = free_basis_state(0, grid, 0.0);
    {
        std::vector<cplx> out_par;
        std::vector<cplx> out_ser;
        const double t_par =
            best_of(repeats, [&] { out_par = batch_inner(waves, wx, psi0.values); });
        const double t_ser =
            best_of(repeats, [&] { out_ser = batch_inner_ref(waves, wx, psi0.values); });
        report("batch_inner", t_ser, t_par, bitwise_equal(out_par, out_ser));
    }

    // synthesis back from 1025 weighted momentum coefficients
    {
        std::vector<cplx> coef = batch_inner_ref(waves, wx, psi0.values);
        for (size_t j = 0; j < coef.size(); ++j) {
            coef[j] *= pg.w[j];
        }
        std::vector<cplx> out_par;
        std::vector<cplx> out_ser;
        const double t_par = best_of(repeats, [&] { out_par = synthesize(waves, coef); });
        const double t_ser = best_of(repeats, [&] { out_ser = synthesize_ref(waves, coef); });
        report("synthesize", t_ser, t_par, bitwise_equal(out_par, out_ser));
    }

    // Gram matrix of 49 transformed states
    {
        const FamilyTable phis = transformed_basis_table(48, 1.0, grid, 0.0);
        std::vector<cplx> out_par;
        std::vector<cplx> out_ser;
        const double t_par = best_of(repeats, [&] { out_par = gram_table(phis, phis, wx); });
        const double t_ser = best_of(repeats, [&] { out_ser = gram_table_ref(phis, phis, wx); });
        report("gram_table", t_ser, t_par, bitwise_equal(out_par, out_ser));
    }

    // scalar quadrature over the 89,728-node plane rule
    {
        const auto eval = [&](int node) {
            const double x = plane.xs[size_t(node)];
            const double y = plane.ys[size_t(node)];
            return cplx(std::exp(-(x * x + y * y)) * (x * x + 0.75), x * y);
        };
        cplx out_par;
        cplx out_ser;
        const double t_par = best_of(repeats, [&] { out_par = plane_sum(plane, eval); });
        const double t_ser = best_of(repeats, [&] { out_ser = plane_sum_ref(plane, eval); });
        report("plane_sum", t_ser, t_par,
               out_par.real() == out_ser.real() && out_par.imag() == out_ser.imag());
    }

    // moment-matrix accumulation: 7x7 outer products per node
    {
        const int N = 7;
        const PlaneNodeEval eval = [&](int node, cplx* a, cplx* b) {
            const double x = plane.xs[size_t(node)];
            const double y = plane.ys[size_t(node)];
            const cplx z(x, y);
            const double phi = std::exp(-0.5 * (x * x + y * y));
            cplx zp = 1.0;
            for (int m = 0; m < N; ++m) {
                a[m] = (x * x + 0.75) / pi * phi * zp;
                b[m] = phi * zp;
                zp *= z;
            }
        };
        std::vector<cplx> out_par;
        std::vector<cplx> out_ser;
        const double t_par =
            best_of(repeats, [&] { out_par = plane_matrix_sum(plane, N, N, eval); });
        const double t_ser =
            best_of(repeats, [&] { out_ser = plane_matrix_sum_ref(plane, N, N, eval); });
        report("plane_matrix_sum", t_ser, t_par, bitwise_equal(out_par, out_ser));
    }

    return 0;
}
