#include <cmath>

#include "doctest.h"

#include "dcs/darboux.hpp"
#include "dcs/deriv.hpp"
#include "dcs/freeparticle.hpp"
#include "dcs/grid.hpp"
#include "dcs/quadrature.hpp"

using namespace dcs;

namespace {

const Grid1D kGrid = make_grid(-20.0, 20.0, 2001);

double state_distance(const SampledState& f, const SampledState& g) {
    double worst = 0.0;
    for (size_t i = 0; i < f.values.size(); ++i) {
        worst = std::max(worst, std::abs(f.values[i] - g.values[i]));
    }
    return worst;
}

// h1 f = -f'' + V1 f with the closed-form potential
SampledState apply_h1(const SampledState& f, double a) {
    const SampledState lap = deriv_x(f, 2);
    SampledState out(f.grid, f.time);
    for (int i = 0; i < f.grid.n; ++i) {
        out.values[size_t(i)] = -lap.values[size_t(i)] +
                                soliton_potential_value(a, f.grid.x(i)) * f.values[size_t(i)];
    }
    return out;
}

}  // namespace

TEST_CASE("seed validation accepts the good seeds") {
    for (double t : {0.0, 1.3}) {
        const SeedReport r = validate_u(soliton_seed(1.0), kGrid, t);
        CHECK(r.ok);
        CHECK(r.reality_residual < 1e-6);
        CHECK(r.evolution_residual < 1e-6);
    }
    const SeedReport pw = validate_u(plane_wave_seed(0.7), kGrid, 0.4);
    CHECK(pw.ok);
    CHECK(pw.reality_residual < 1e-6);
}

TEST_CASE("seed validation rejects a mixed mode") {
    TransformationFunction tf;
    tf.u = [](double x, double t) {
        return free_basis_value(0, x, t) + 0.5 * free_basis_value(1, x, t);
    };
    const SeedReport r = validate_u(tf, kGrid, 0.0);
    CHECK_FALSE(r.ok);
    CHECK(r.reality_residual > 1e-3);
}

TEST_CASE("seed with a zero crossing is rejected with a location") {
    TransformationFunction tf;
    tf.u = [](double x, double) { return cplx(std::sinh(x), 0.0); };
    CHECK_THROWS_AS(validate_u(tf, kGrid, 0.0), domain_error);
}

TEST_CASE("operator built from the soliton seed matches the exact one") {
    for (double t : {0.0, 1.3}) {
        const DarbouxOperator num = darboux_from_u(soliton_seed(1.0), kGrid, t);
        const DarbouxOperator exact = soliton_operator(1.0, kGrid, t);
        CHECK(std::abs(num.gauge - exact.gauge) < 1e-10);
        double worst = 0.0;
        for (size_t i = 0; i < num.log_derivative.size(); ++i) {
            worst = std::max(worst, std::abs(num.log_derivative[i] - exact.log_derivative[i]));
        }
        CHECK(worst < 1e-8);
        CHECK(std::abs(num.log_derivative[1000]) < 1e-10);  // center value tanh(0)
    }
}

TEST_CASE("constant seed gives the bare derivative operator") {
    const DarbouxOperator op = darboux_from_u(plane_wave_seed(0.0), kGrid, 0.9);
    CHECK(std::abs(op.gauge - 1.0) < 1e-10);
    double worst = 0.0;
    for (const cplx& c : op.log_derivative) {
        worst = std::max(worst, std::abs(c));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("transformed potential matches the sech-squared well") {
    for (double a : {0.6, 1.0, 2.0}) {
        const std::vector<double> v1 = transformed_potential(soliton_seed(a), kGrid, 0.0);
        double worst = 0.0;
        for (int i = 0; i < kGrid.n; ++i) {
            worst = std::max(worst, std::abs(v1[size_t(i)] - soliton_potential_value(a, kGrid.x(i))));
        }
        INFO("a = ", a);
        CHECK(worst < 1e-8);
    }
    const std::vector<double> v1 = transformed_potential(soliton_seed(1.0), kGrid, 0.0);
    CHECK(std::abs(v1[1000] + 2.0) < 1e-8);
    // tail bound sits at the rounding floor of differentiating 2 ln|u| ~ 40
    CHECK(std::abs(v1[0]) < 1e-9);
    CHECK(std::abs(v1[2000]) < 1e-9);
    const std::vector<double> v8 = transformed_potential(soliton_seed(2.0), kGrid, 0.0);
    CHECK(std::abs(v8[1000] + 8.0) < 1e-8);
}

TEST_CASE("transformed potential refuses an invalid seed") {
    TransformationFunction tf;
    tf.u = [](double x, double t) {
        return free_basis_value(0, x, t) + 0.5 * free_basis_value(1, x, t);
    };
    CHECK_THROWS_AS(transformed_potential(tf, kGrid, 0.0), domain_error);
}

TEST_CASE("forward operator annihilates its own seed") {
    // small parameter: the window tails stay tame and the norm is absolute
    {
        const double a = 0.25;
        SampledState u(kGrid, 0.0);
        for (int i = 0; i < kGrid.n; ++i) {
            u.values[size_t(i)] = std::cosh(a * kGrid.x(i));
        }
        const SampledState lu = apply_darboux(u, soliton_operator(a, kGrid, 0.0), Direction::forward);
        CHECK(l2_norm(lu) < 1e-8);
    }
    // unit parameter: the seed grows to ~1e8, compare relative to its norm
    {
        SampledState u(kGrid, 0.0);
        for (int i = 0; i < kGrid.n; ++i) {
            u.values[size_t(i)] = std::cosh(kGrid.x(i));
        }
        const SampledState lu = apply_darboux(u, soliton_operator(1.0, kGrid, 0.0), Direction::forward);
        CHECK(l2_norm(lu) / l2_norm(u) < 1e-11);
    }
}

TEST_CASE("factorization of the free hamiltonian") {
    const double a = 1.0;
    const DarbouxOperator op = soliton_operator(a, kGrid, 0.0);
    for (int n = 0; n <= 8; ++n) {
        const SampledState psi = free_basis_state(n, kGrid, 0.0);
        const SampledState lpsi = apply_darboux(psi, op, Direction::forward);
        const SampledState ll = apply_darboux(lpsi, op, Direction::adjoint);
        const SampledState lap = deriv_x(psi, 2);
        SampledState expect(kGrid, 0.0);
        for (int i = 0; i < kGrid.n; ++i) {
            expect.values[size_t(i)] = -lap.values[size_t(i)] + a * a * psi.values[size_t(i)];
        }
        CHECK(l2_norm(ll - expect) < 1e-6);
    }
}

TEST_CASE("reverse factorization on the transformed basis") {
    const double a = 1.0;
    const DarbouxOperator op = soliton_operator(a, kGrid, 0.0);
    for (int n = 0; n <= 8; ++n) {
        const SampledState phi = transformed_basis_state(n, a, kGrid, 0.0);
        const SampledState lphi = apply_darboux(phi, op, Direction::adjoint);
        const SampledState ll = apply_darboux(lphi, op, Direction::forward);
        SampledState expect = apply_h1(phi, a);
        for (int i = 0; i < kGrid.n; ++i) {
            expect.values[size_t(i)] += a * a * phi.values[size_t(i)];
        }
        CHECK(l2_norm(ll - expect) < 1e-6);
    }
}

TEST_CASE("intertwining relation on basis and coherent states") {
    const double a = 1.0;
    const double t = 0.35;
    const double dt = 1e-4;
    const cplx z(0.9, -0.6);

    auto make_state = [&](int which, double s) {
        if (which == 0) return free_basis_state(0, kGrid, s);
        if (which == 1) return free_basis_state(3, kGrid, s);
        return free_coherent_state(z, 30, kGrid, s);
    };

    for (int which : {0, 1, 2}) {
        // left side: L applied to the free-equation residual of f
        const SampledState fm = make_state(which, t - dt);
        const SampledState f0 = make_state(which, t);
        const SampledState fp = make_state(which, t + dt);
        const SampledState lap0 = deriv_x(f0, 2);
        SampledState resid0(kGrid, t);
        for (int i = 0; i < kGrid.n; ++i) {
            const cplx ddt = i_unit * (fp.values[size_t(i)] - fm.values[size_t(i)]) / (2.0 * dt);
            resid0.values[size_t(i)] = ddt + lap0.values[size_t(i)];
        }
        const SampledState lhs = apply_darboux(resid0, soliton_operator(a, kGrid, t), Direction::forward);

        // right side: transformed-equation residual of L f
        const SampledState bm = apply_darboux(fm, soliton_operator(a, kGrid, t - dt), Direction::forward);
        const SampledState b0 = apply_darboux(f0, soliton_operator(a, kGrid, t), Direction::forward);
        const SampledState bp = apply_darboux(fp, soliton_operator(a, kGrid, t + dt), Direction::forward);
        const SampledState h1b = apply_h1(b0, a);
        SampledState rhs(kGrid, t);
        for (int i = 0; i < kGrid.n; ++i) {
            const cplx ddt = i_unit * (bp.values[size_t(i)] - bm.values[size_t(i)]) / (2.0 * dt);
            rhs.values[size_t(i)] = ddt - h1b.values[size_t(i)];
        }
        INFO("state ", which);
        CHECK(l2_norm(lhs - rhs) < 1e-5);
    }
}

TEST_CASE("bound state facts") {
    const double a = 1.0;
    const SampledState b = bound_state(a, kGrid, 0.0);
    CHECK(std::abs(b.values[1000] - cplx(std::sqrt(0.5))) < 1e-14);
    CHECK(std::abs(inner_product(b, b) - 1.0) < 1e-10);

    const SampledState hb = apply_h1(b, a);
    SampledState expect(kGrid, 0.0);
    for (int i = 0; i < kGrid.n; ++i) {
        expect.values[size_t(i)] = -a * a * b.values[size_t(i)];
    }
    CHECK(l2_norm(hb - expect) < 1e-6);

    for (int n = 0; n <= 6; ++n) {
        const SampledState phi = transformed_basis_state(n, a, kGrid, 0.0);
        CHECK(std::abs(inner_product(b, phi)) < 1e-8);
    }
}

TEST_CASE("scattering states") {
    const double a = 1.0;
    const SampledState s0 = scattering_state(0.0, a, kGrid, 0.0);
    const double c = 1.0 / std::sqrt(2.0 * pi);
    double worst = 0.0;
    for (int i = 0; i < kGrid.n; ++i) {
        worst = std::max(worst, std::abs(s0.values[size_t(i)] - cplx(-std::tanh(kGrid.x(i)) * c)));
    }
    CHECK(worst < 1e-14);

    for (double p : {0.5, 1.0, 3.0}) {
        const SampledState sp = scattering_state(p, a, kGrid, 0.6);
        const SampledState hs = apply_h1(sp, a);
        SampledState expect(kGrid, 0.6);
        for (int i = 0; i < kGrid.n; ++i) {
            expect.values[size_t(i)] = p * p * sp.values[size_t(i)];
        }
        CHECK(max_abs(hs - expect) < 1e-5);
        CHECK(std::abs(std::abs(sp.values[0]) - c) < 1e-8);
        CHECK(std::abs(std::abs(sp.values[2000]) - c) < 1e-8);
    }

    // the differential operator really maps plane waves onto these states
    for (double p : {0.5, 2.0}) {
        const SampledState wave = plane_wave(p, kGrid, 0.6);
        const SampledState lw =
            apply_darboux(wave, soliton_operator(a, kGrid, 0.6), Direction::forward);
        const SampledState sp = scattering_state(p, a, kGrid, 0.6);
        const double np = std::sqrt(p * p + a * a);
        double w2 = 0.0;
        for (int i = 0; i < kGrid.n; ++i) {
            w2 = std::max(w2, std::abs(lw.values[size_t(i)] - np * sp.values[size_t(i)]));
        }
        CHECK(w2 < 1e-6);
    }
}

TEST_CASE("transformed basis states") {
    const double a = 1.0;
    const SampledState phi0 = transformed_basis_state(0, a, kGrid, 0.0);
    CHECK(std::abs(inner_product(phi0, phi0) - cplx(a * a + 0.25)) < 1e-6);

    // analytic route equals the stencil route through the operator
    const DarbouxOperator op = soliton_operator(a, kGrid, 0.7);
    for (int n : {0, 3, 8}) {
        const SampledState direct = transformed_basis_state(n, a, kGrid, 0.7);
        const SampledState viaop =
            apply_darboux(free_basis_state(n, kGrid, 0.7), op, Direction::forward);
        CHECK(state_distance(direct, viaop) < 1e-6);
    }

    // table matches per-state construction
    const FamilyTable tab = transformed_basis_table(8, a, kGrid, 0.7);
    const SampledState phi8 = transformed_basis_state(8, a, kGrid, 0.7);
    double worst = 0.0;
    for (int i = 0; i < kGrid.n; ++i) {
        worst = std::max(worst, std::abs(tab.row(8)[i] - phi8.values[size_t(i)]));
    }
    CHECK(worst < 1e-14);

    // transformed evolution equation
    const double dt = 1e-4;
    for (int n : {0, 4}) {
        const SampledState pm = transformed_basis_state(n, a, kGrid, 0.7 - dt);
        const SampledState p0 = transformed_basis_state(n, a, kGrid, 0.7);
        const SampledState pp = transformed_basis_state(n, a, kGrid, 0.7 + dt);
        const SampledState h1p = apply_h1(p0, a);
        double w3 = 0.0;
        for (int i = 0; i < kGrid.n; ++i) {
            const cplx ddt = i_unit * (pp.values[size_t(i)] - pm.values[size_t(i)]) / (2.0 * dt);
            w3 = std::max(w3, std::abs(ddt - h1p.values[size_t(i)]));
        }
        CHECK(w3 < 1e-5);
    }
}

TEST_CASE("spectral operators invert and round-trip") {
    const double a = 1.0;
    const MomentumGrid pg = make_momentum_grid(12.0, 1025);
    const SpectralWorkspace ws(a, pg, kGrid, 0.0);
    const SampledState psi0 = free_basis_state(0, kGrid, 0.0);

    // inverse pair: the adjoint-raising kernel undoes the inverse map
    const SampledState eta0 = apply_spectral(psi0, spectral_M(ws), ws);
    const SampledState back = apply_spectral(eta0, spectral_L_adjoint(ws), ws);
    CHECK(l2_norm(back - psi0) < 1e-6);

    // unitary round trip
    const SampledState u0 = apply_spectral(psi0, spectral_U(ws), ws);
    const SampledState round = apply_spectral(u0, spectral_U_adjoint(ws), ws);
    CHECK(l2_norm(round - psi0) < 1e-6);

    // composing the inverse map with its adjoint gives the inverse hamiltonian shift
    const SampledState mm = apply_spectral(eta0, spectral_M_adjoint(ws), ws);
    const SampledState ginv = apply_spectral(psi0, spectral_g0_power(ws, -1.0), ws);
    CHECK(l2_norm(mm - ginv) < 1e-6);

    // square root of the shifted hamiltonian composes to the full power
    const SampledState half = apply_spectral(psi0, spectral_g0_power(ws, 0.5), ws);
    const SampledState full = apply_spectral(half, spectral_g0_power(ws, 0.5), ws);
    const SampledState g1 = apply_spectral(psi0, spectral_g0_power(ws, 1.0), ws);
    CHECK(l2_norm(full - g1) < 1e-6);

    // spectral route of the first-order map equals the differential route
    const SampledState psi3 = free_basis_state(3, kGrid, 0.0);
    const SampledState via_spectral = apply_spectral(psi3, spectral_L(ws), ws);
    const SampledState via_stencil =
        apply_darboux(psi3, soliton_operator(a, kGrid, 0.0), Direction::forward);
    CHECK(l2_norm(via_spectral - via_stencil) < 1e-6);
}

TEST_CASE("spectral apply reports window clipping") {
    const MomentumGrid pg = make_momentum_grid(12.0, 257);
    const SpectralWorkspace ws(1.0, pg, kGrid, 0.0);
    SampledState flat(kGrid, 0.0);
    for (int i = 0; i < kGrid.n; ++i) {
        flat.values[size_t(i)] = 1.0;
    }
    double level = 0.0;
    apply_spectral(flat, spectral_U(ws), ws, &level);
    CHECK(level == doctest::Approx(1.0));

    const SampledState psi0 = free_basis_state(0, kGrid, 0.0);
    level = 1.0;
    apply_spectral(psi0, spectral_U(ws), ws, &level);
    CHECK(level < 1e-12);
}

TEST_CASE("dual basis behaves as the inverse-adjoint image") {
    const double a = 1.0;
    const MomentumGrid pg = make_momentum_grid(12.0, 1025);
    const SpectralWorkspace ws(a, pg, kGrid, 0.0);

    const SampledState eta0 = dual_basis_state(0, ws);
    const FamilyTable tab = dual_basis_table(4, ws);
    double worst = 0.0;
    for (int i = 0; i < kGrid.n; ++i) {
        worst = std::max(worst, std::abs(tab.row(0)[i] - eta0.values[size_t(i)]));
    }
    CHECK(worst < 1e-12);

    // norm against the closed-form momentum integral sqrt(2 pi) e^2 erfc(sqrt 2)
    const double expect = std::sqrt(2.0 * pi) * std::exp(2.0) * std::erfc(std::sqrt(2.0));
    CHECK(std::abs(inner_product(eta0, eta0).real() - expect) < 1e-6);

    // first biorthogonality entries
    const SampledState phi0 = transformed_basis_state(0, a, kGrid, 0.0);
    const SampledState phi2 = transformed_basis_state(2, a, kGrid, 0.0);
    CHECK(std::abs(inner_product(eta0, phi0) - 1.0) < 1e-6);
    CHECK(std::abs(inner_product(eta0, phi2)) < 1e-6);

    // orthogonal to the bound state
    const SampledState b = bound_state(a, kGrid, 0.0);
    CHECK(std::abs(inner_product(b, eta0)) < 1e-6);
}

TEST_CASE("coherent states on the transformed side, two routes") {
    const double a = 1.0;
    const MomentumGrid pg = make_momentum_grid(12.0, 1025);
    const SpectralWorkspace ws(a, pg, kGrid, 0.0);
    const cplx z(0.8, -0.3);
    const int n_need = required_truncation(z);

    const SampledState psi_z = free_coherent_state(z, n_need, kGrid, 0.0);

    const SampledState eta_series = dual_coherent_state(z, n_need, ws);
    const SampledState eta_op = apply_spectral(psi_z, spectral_M(ws), ws);
    CHECK(l2_norm(eta_series - eta_op) / l2_norm(eta_op) < 1e-6);

    const SampledState phi_series = transformed_coherent_state(z, n_need, a, kGrid, 0.0);
    const SampledState phi_op =
        apply_darboux(psi_z, soliton_operator(a, kGrid, 0.0), Direction::forward);
    CHECK(l2_norm(phi_series - phi_op) / l2_norm(phi_op) < 1e-6);

    // z = 0 collapses to the lowest members
    const SampledState e0 = dual_coherent_state(cplx(0.0, 0.0), 3, ws);
    CHECK(state_distance(e0, dual_basis_state(0, ws)) < 1e-12);
    const SampledState p0 = transformed_coherent_state(cplx(0.0, 0.0), 3, a, kGrid, 0.0);
    CHECK(state_distance(p0, transformed_basis_state(0, a, kGrid, 0.0)) < 1e-12);
}
