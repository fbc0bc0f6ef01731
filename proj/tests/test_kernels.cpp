#include <cmath>
#include <random>
#include <vector>

#include "dcs/kernels.hpp"
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dcs;

namespace {

// deterministic pseudo-random fixtures so every run sees the same bits
std::mt19937 fixture_rng(0x5eed);

double draw() {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    return d(fixture_rng);
}

cplx draw_c() {
    const double re = draw();
    return {re, draw()};
}

FamilyTable random_table(int rows, int cols) {
    FamilyTable F(rows, cols);
    for (auto& v : F.data) {
        v = draw_c();
    }
    return F;
}

std::vector<double> random_weights(int n) {
    std::vector<double> w(static_cast<size_t>(n));
    for (auto& v : w) {
        v = draw();
    }
    return w;
}

std::vector<cplx> random_samples(int n) {
    std::vector<cplx> f(static_cast<size_t>(n));
    for (auto& v : f) {
        v = draw_c();
    }
    return f;
}

bool bitwise_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (size_t k = 0; k < a.size(); ++k) {
        if (a[k].real() != b[k].real() || a[k].imag() != b[k].imag()) {
            return false;
        }
    }
    return true;
}

// runs the parallel kernel at several thread counts and requires every result
// to match the serial reference bit for bit
template <class Run>
void check_thread_invariance(const std::vector<cplx>& reference, const Run& run) {
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 3}) {
        omp_set_num_threads(threads);
        INFO("threads = ", threads);
        CHECK(bitwise_equal(run(), reference));
    }
    omp_set_num_threads(saved);
#else
    CHECK(bitwise_equal(run(), reference));
#endif
}

}  // namespace

TEST_CASE("family table rows address contiguous storage") {
    FamilyTable F(3, 5);
    for (size_t k = 0; k < F.data.size(); ++k) {
        F.data[k] = cplx(double(k), 0.0);
    }
    CHECK(F.row(2)[4] == cplx(14.0, 0.0));
    CHECK(F.row(0) == F.data.data());
}

TEST_CASE("batch_inner matches its reference at any thread count") {
    const FamilyTable F = random_table(7, 101);
    const std::vector<double> w = random_weights(101);
    const std::vector<cplx> f = random_samples(101);

    const std::vector<cplx> ref = batch_inner_ref(F, w, f);
    // independent accumulation of one entry
    cplx c3 = 0.0;
    for (int i = 0; i < 101; ++i) {
        c3 += w[size_t(i)] * std::conj(F.row(3)[i]) * f[size_t(i)];
    }
    CHECK(std::abs(ref[3] - c3) < 1e-14);

    check_thread_invariance(ref, [&] { return batch_inner(F, w, f); });
}

TEST_CASE("synthesize matches its reference at any thread count") {
    const FamilyTable F = random_table(9, 83);
    const std::vector<cplx> coef = random_samples(9);

    const std::vector<cplx> ref = synthesize_ref(F, coef);
    cplx o5 = 0.0;
    for (int j = 0; j < 9; ++j) {
        o5 += coef[size_t(j)] * F.row(j)[5];
    }
    CHECK(std::abs(ref[5] - o5) < 1e-14);

    check_thread_invariance(ref, [&] { return synthesize(F, coef); });
}

TEST_CASE("gram_table matches its reference at any thread count") {
    const FamilyTable A = random_table(6, 91);
    const FamilyTable B = random_table(4, 91);
    const std::vector<double> w = random_weights(91);

    const std::vector<cplx> ref = gram_table_ref(A, B, w);
    cplx g23 = 0.0;
    for (int i = 0; i < 91; ++i) {
        g23 += w[size_t(i)] * std::conj(A.row(2)[i]) * B.row(3)[i];
    }
    CHECK(std::abs(ref[size_t(2) * 4 + 3] - g23) < 1e-14);

    check_thread_invariance(ref, [&] { return gram_table(A, B, w); });
}

TEST_CASE("plane_sum matches its reference at any thread count") {
    const PlaneQuadrature q = make_plane_quadrature(3.0, 40, 16);
    const auto eval = [&](int node) {
        const double x = q.xs[size_t(node)];
        const double y = q.ys[size_t(node)];
        return cplx(std::exp(-x * x - y * y), std::sin(x + 2.0 * y));
    };

    const cplx ref = plane_sum_ref(q, eval);
#ifdef _OPENMP
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 3}) {
        omp_set_num_threads(threads);
        const cplx got = plane_sum(q, eval);
        INFO("threads = ", threads);
        CHECK(got.real() == ref.real());
        CHECK(got.imag() == ref.imag());
    }
    omp_set_num_threads(saved);
#else
    const cplx got = plane_sum(q, eval);
    CHECK(got.real() == ref.real());
    CHECK(got.imag() == ref.imag());
#endif
}

TEST_CASE("plane_matrix_sum matches its reference at any thread count") {
    const PlaneQuadrature q = make_plane_quadrature(2.5, 32, 12);
    const int ra = 3;
    const int rb = 4;
    const PlaneNodeEval eval = [&](int node, cplx* a, cplx* b) {
        const double x = q.xs[size_t(node)];
        const double y = q.ys[size_t(node)];
        const cplx z(x, y);
        cplx pa = std::exp(-0.5 * (x * x + y * y));
        for (int m = 0; m < ra; ++m) {
            a[m] = pa;
            pa *= z;
        }
        cplx pb = 1.0;
        for (int n = 0; n < rb; ++n) {
            b[n] = pb;
            pb *= std::conj(z);
        }
    };

    const std::vector<cplx> ref = plane_matrix_sum_ref(q, ra, rb, eval);
    // cross-check one entry against the scalar kernel
    const cplx direct = plane_sum_ref(q, [&](int node) {
        std::vector<cplx> a(static_cast<size_t>(ra));
        std::vector<cplx> b(static_cast<size_t>(rb));
        eval(node, a.data(), b.data());
        return a[2] * std::conj(b[1]);
    });
    CHECK(std::abs(ref[size_t(2) * size_t(rb) + 1] - direct) < 1e-13);

    check_thread_invariance(ref, [&] { return plane_matrix_sum(q, ra, rb, eval); });
}

TEST_CASE("kernels refuse mismatched shapes") {
    const FamilyTable F = random_table(3, 20);
    const std::vector<double> w_bad = random_weights(19);
    const std::vector<double> w_ok = random_weights(20);
    const std::vector<cplx> f_bad = random_samples(21);
    const std::vector<cplx> f_ok = random_samples(20);

    CHECK_THROWS_AS(batch_inner(F, w_bad, f_ok), domain_error);
    CHECK_THROWS_AS(batch_inner(F, w_ok, f_bad), domain_error);
    CHECK_THROWS_AS(batch_inner_ref(F, w_bad, f_ok), domain_error);

    CHECK_THROWS_AS(synthesize(F, random_samples(2)), domain_error);
    CHECK_THROWS_AS(synthesize_ref(F, random_samples(4)), domain_error);

    const FamilyTable Bnarrow = random_table(3, 19);
    CHECK_THROWS_AS(gram_table(F, Bnarrow, w_ok), domain_error);
    CHECK_THROWS_AS(gram_table_ref(F, Bnarrow, w_ok), domain_error);
    CHECK_THROWS_AS(gram_table(F, F, w_bad), domain_error);
}
