#include "dcs/darboux.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dcs/deriv.hpp"

namespace dcs {

namespace {

void check_soliton_parameter(double a) {
    if (!(a > 0.0)) {
        throw config_error("soliton parameter must be positive, got " + std::to_string(a));
    }
}

std::vector<cplx> sample_seed(const TransformationFunction& tf, const Grid1D& g, double t) {
    std::vector<cplx> u(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        u[size_t(i)] = tf.u(g.x(i), t);
    }
    return u;
}

void reject_zeros(const std::vector<cplx>& u, const Grid1D& g) {
    // a zero shows up as a modulus dip against the neighborhood (the seed may
    // grow by many orders across the window, so no global scale works)
    for (int i = 0; i < g.n; ++i) {
        double local = 0.0;
        for (int j = std::max(0, i - 4); j <= std::min(g.n - 1, i + 4); ++j) {
            local = std::max(local, std::abs(u[size_t(j)]));
        }
        if (std::abs(u[size_t(i)]) < 1e-12 * local || local == 0.0) {
            throw domain_error("seed modulus vanishes near x = " + std::to_string(g.x(i)) +
                               "; the log-derivative is undefined there");
        }
    }
    // a zero strictly between nodes flips the phase by ~pi
    for (int i = 1; i < g.n; ++i) {
        if (std::abs(std::arg(u[size_t(i)] / u[size_t(i) - 1])) > 3.0) {
            throw domain_error("seed crosses zero near x = " +
                               std::to_string(0.5 * (g.x(i - 1) + g.x(i))));
        }
    }
}

// cumulative unwrapped argument along the grid; branch jumps of the principal
// value would otherwise wreck the third derivative
std::vector<double> unwrapped_phase(const std::vector<cplx>& u) {
    std::vector<double> phase(u.size());
    phase[0] = std::arg(u[0]);
    for (size_t i = 1; i < u.size(); ++i) {
        phase[i] = phase[i - 1] + std::arg(u[i] / u[i - 1]);
    }
    return phase;
}

}  // namespace

TransformationFunction soliton_seed(double a) {
    check_soliton_parameter(a);
    TransformationFunction tf;
    tf.factorization_energy = -a * a;
    tf.u = [a](double x, double t) {
        return std::cosh(a * x) * std::polar(1.0, a * a * t);
    };
    return tf;
}

TransformationFunction plane_wave_seed(double p) {
    TransformationFunction tf;
    tf.factorization_energy = p * p;
    tf.u = [p](double x, double t) { return std::polar(1.0, p * x - p * p * t); };
    return tf;
}

SeedReport validate_u(const TransformationFunction& tf, const Grid1D& g, double t, double tol) {
    const std::vector<cplx> u = sample_seed(tf, g, t);
    reject_zeros(u, g);

    SeedReport r;
    const std::vector<double> phase = unwrapped_phase(u);
    const std::vector<double> d3 = deriv_uniform(phase, g.dx, 3);
    for (double v : d3) {
        r.reality_residual = std::max(r.reality_residual, 2.0 * std::abs(v));
    }

    const double dt = 1e-4;
    const std::vector<cplx> up = sample_seed(tf, g, t + dt);
    const std::vector<cplx> um = sample_seed(tf, g, t - dt);
    const std::vector<cplx> lap = deriv_uniform(u, g.dx, 2);
    for (int i = 0; i < g.n; ++i) {
        const cplx ddt = i_unit * (up[size_t(i)] - um[size_t(i)]) / (2.0 * dt);
        const cplx resid = ddt + lap[size_t(i)];
        r.evolution_residual = std::max(r.evolution_residual,
                                        std::abs(resid) / (1.0 + std::abs(u[size_t(i)])));
    }
    r.ok = r.reality_residual < tol && r.evolution_residual < tol;
    return r;
}

DarbouxOperator darboux_from_u(const TransformationFunction& tf, const Grid1D& g, double t) {
    const SeedReport check = validate_u(tf, g, t);
    if (!check.ok) {
        throw domain_error("seed failed validation: reality residual " +
                           std::to_string(check.reality_residual) + ", evolution residual " +
                           std::to_string(check.evolution_residual));
    }

    DarbouxOperator op;
    op.grid = g;
    op.time = t;
    const std::vector<cplx> u = sample_seed(tf, g, t);
    const std::vector<cplx> du = deriv_uniform(u, g.dx, 1);
    op.log_derivative.resize(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        op.log_derivative[size_t(i)] = -du[size_t(i)] / u[size_t(i)];
    }

    // gauge factor: exp of twice the time integral of Im(ln u)_xx, which the
    // reality condition makes x-independent; evaluated at the window center
    op.gauge = 1.0;
    if (std::abs(t) > 1e-14) {
        const int mid = g.n / 2;
        auto center_curvature = [&](double s) {
            const std::vector<cplx> us = sample_seed(tf, g, s);
            const std::vector<double> phase = unwrapped_phase(us);
            const std::vector<double> d2 = deriv_uniform(phase, g.dx, 2);
            return d2[size_t(mid)];
        };
        const int n_nodes = std::max(33, 2 * int(std::ceil(std::abs(t) / 0.02)) + 1);
        const double h = std::abs(t) / double(n_nodes - 1);
        const std::vector<double> w = simpson_weights(n_nodes, h);
        double integral = 0.0;
        for (int k = 0; k < n_nodes; ++k) {
            const double s = (t >= 0.0 ? 1.0 : -1.0) * h * double(k);
            integral += w[size_t(k)] * center_curvature(s);
        }
        if (t < 0.0) {
            integral = -integral;
        }
        op.gauge = std::exp(2.0 * integral);
    }
    return op;
}

DarbouxOperator soliton_operator(double a, const Grid1D& g, double t) {
    check_soliton_parameter(a);
    DarbouxOperator op;
    op.grid = g;
    op.time = t;
    op.gauge = 1.0;
    op.log_derivative.resize(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        op.log_derivative[size_t(i)] = -a * std::tanh(a * g.x(i));
    }
    return op;
}

SampledState apply_darboux(const SampledState& f, const DarbouxOperator& op, Direction d) {
    if (!(f.grid == op.grid)) {
        throw domain_error("state and operator live on different grids");
    }
    if (std::abs(f.time - op.time) > 1e-12) {
        throw domain_error("state and operator are sampled at different times");
    }
    const SampledState df = deriv_x(f, 1);
    SampledState out(f.grid, f.time);
    if (d == Direction::forward) {
        for (int i = 0; i < f.grid.n; ++i) {
            out.values[size_t(i)] =
                op.gauge * (op.log_derivative[size_t(i)] * f.values[size_t(i)] +
                            df.values[size_t(i)]);
        }
    } else {
        const cplx gbar = std::conj(op.gauge);
        for (int i = 0; i < f.grid.n; ++i) {
            out.values[size_t(i)] =
                gbar * (std::conj(op.log_derivative[size_t(i)]) * f.values[size_t(i)] -
                        df.values[size_t(i)]);
        }
    }
    return out;
}

std::vector<double> transformed_potential(const TransformationFunction& tf, const Grid1D& g,
                                          double t) {
    const SeedReport check = validate_u(tf, g, t);
    if (!check.ok) {
        throw domain_error("seed failed validation: reality residual " +
                           std::to_string(check.reality_residual) + ", evolution residual " +
                           std::to_string(check.evolution_residual));
    }
    const std::vector<cplx> u = sample_seed(tf, g, t);
    std::vector<double> log_sq(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        log_sq[size_t(i)] = 2.0 * std::log(std::abs(u[size_t(i)]));
    }
    std::vector<double> v1 = deriv_uniform(log_sq, g.dx, 2);
    for (double& v : v1) {
        v = -v;
    }
    return v1;
}

double soliton_potential_value(double a, double x) {
    const double q = 1.0 / std::cosh(a * x);
    return -2.0 * a * a * q * q;
}

cplx bound_state_value(double a, double x, double t) {
    return std::sqrt(0.5 * a) * std::polar(1.0, -a * a * t) / std::cosh(a * x);
}

SampledState bound_state(double a, const Grid1D& g, double t) {
    check_soliton_parameter(a);
    SampledState out(g, t);
    for (int i = 0; i < g.n; ++i) {
        out.values[size_t(i)] = bound_state_value(a, g.x(i), t);
    }
    return out;
}

cplx scattering_state_value(double p, double a, double x, double t) {
    const cplx factor(-a * std::tanh(a * x), p);
    return factor / std::sqrt(p * p + a * a) * plane_wave_value(p, x, t);
}

SampledState scattering_state(double p, double a, const Grid1D& g, double t) {
    check_soliton_parameter(a);
    SampledState out(g, t);
    for (int i = 0; i < g.n; ++i) {
        out.values[size_t(i)] = scattering_state_value(p, a, g.x(i), t);
    }
    return out;
}

SampledState transformed_basis_state(int n, double a, const Grid1D& g, double t) {
    check_soliton_parameter(a);
    SampledState out(g, t);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        out.values[size_t(i)] = -a * std::tanh(a * x) * free_basis_value(n, x, t) +
                                free_basis_deriv_value(n, x, t);
    }
    return out;
}

FamilyTable transformed_basis_table(int n_max, double a, const Grid1D& g, double t) {
    check_soliton_parameter(a);
    const FamilyTable base = free_basis_table(n_max, g, t);
    const FamilyTable slope = free_basis_deriv_table(n_max, g, t);
    FamilyTable tab(n_max + 1, g.n);
    std::vector<double> th(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        th[size_t(i)] = std::tanh(a * g.x(i));
    }
    for (int n = 0; n <= n_max; ++n) {
        const cplx* b = base.row(n);
        const cplx* s = slope.row(n);
        cplx* r = tab.row(n);
        for (int i = 0; i < g.n; ++i) {
            r[i] = -a * th[size_t(i)] * b[i] + s[i];
        }
    }
    return tab;
}

SampledState transformed_coherent_state(cplx z, int n_max, double a, const Grid1D& g, double t) {
    const int need = required_truncation(z, 1e-12);
    if (n_max < need) {
        throw config_error("coherent series: truncation " + std::to_string(n_max) +
                           " too small for |z| = " + std::to_string(std::abs(z)) +
                           ", need at least " + std::to_string(need));
    }
    const std::vector<cplx> coef = coherent_coefficients(z, n_max);
    const FamilyTable tab = transformed_basis_table(n_max, a, g, t);
    return SampledState(g, t, synthesize(tab, coef));
}

// ---------------------------------------------------------------------------

SpectralWorkspace::SpectralWorkspace(double a, const MomentumGrid& pg, const Grid1D& g, double t)
    : a_(a), time_(t), grid_(g), pg_(pg), wx_(simpson_weights(g)) {
    check_soliton_parameter(a);
    free_ = plane_wave_table(pg, g, t);
    const int n_p = free_.n_rows;
    transformed_ = FamilyTable(n_p, g.n);
    std::vector<double> th(size_t(g.n));
    for (int i = 0; i < g.n; ++i) {
        th[size_t(i)] = std::tanh(a * g.x(i));
    }
    for (int j = 0; j < n_p; ++j) {
        const double p = pg.p[size_t(j)];
        const double np_inv = 1.0 / std::sqrt(p * p + a * a);
        const cplx* wave = free_.row(j);
        cplx* row = transformed_.row(j);
        for (int i = 0; i < g.n; ++i) {
            row[i] = cplx(-a * th[size_t(i)], p) * np_inv * wave[i];
        }
    }
}

const FamilyTable& SpectralWorkspace::family(Family f) const {
    return f == Family::free ? free_ : transformed_;
}

namespace {

SpectralKernel make_kernel(const SpectralWorkspace& ws, Family in, Family out, double s) {
    // multiplier (p^2 + a^2)^{s}
    SpectralKernel k;
    k.in = in;
    k.out = out;
    const auto& p = ws.momentum().p;
    k.multiplier.resize(p.size());
    const double a2 = ws.a() * ws.a();
    for (size_t j = 0; j < p.size(); ++j) {
        k.multiplier[j] = std::pow(p[j] * p[j] + a2, s);
    }
    return k;
}

}  // namespace

SpectralKernel spectral_M(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::free, Family::transformed, -0.5);
}
SpectralKernel spectral_M_adjoint(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::transformed, Family::free, -0.5);
}
SpectralKernel spectral_U(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::free, Family::transformed, 0.0);
}
SpectralKernel spectral_U_adjoint(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::transformed, Family::free, 0.0);
}
SpectralKernel spectral_L(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::free, Family::transformed, 0.5);
}
SpectralKernel spectral_L_adjoint(const SpectralWorkspace& ws) {
    return make_kernel(ws, Family::transformed, Family::free, 0.5);
}
SpectralKernel spectral_g0_power(const SpectralWorkspace& ws, double s) {
    return make_kernel(ws, Family::free, Family::free, s);
}

SampledState apply_spectral(const SampledState& f, const SpectralKernel& k,
                            const SpectralWorkspace& ws, double* boundary_level) {
    if (!(f.grid == ws.grid())) {
        throw domain_error("spectral apply: state grid differs from the workspace grid");
    }
    if (std::abs(f.time - ws.time()) > 1e-12) {
        throw domain_error("spectral apply: state time differs from the workspace time");
    }
    if (k.multiplier.size() != ws.momentum().p.size()) {
        throw domain_error("spectral apply: kernel was built for another momentum grid");
    }
    if (boundary_level != nullptr) {
        *boundary_level = boundary_fraction(f);
    }
    const std::vector<cplx> c = batch_inner(ws.family(k.in), ws.grid_weights(), f.values);
    std::vector<cplx> scaled(c.size());
    const auto& wp = ws.momentum().w;
    for (size_t j = 0; j < c.size(); ++j) {
        scaled[j] = wp[j] * k.multiplier[j] * c[j];
    }
    return SampledState(f.grid, f.time, synthesize(ws.family(k.out), scaled));
}

SampledState dual_basis_state(int n, const SpectralWorkspace& ws) {
    return apply_spectral(free_basis_state(n, ws.grid(), ws.time()), spectral_M(ws), ws);
}

FamilyTable dual_basis_table(int n_max, const SpectralWorkspace& ws) {
    // analysis coefficients of every basis state against the plane waves,
    // then one synthesis over the scattering family per state
    const FamilyTable base = free_basis_table(n_max, ws.grid(), ws.time());
    const std::vector<cplx> coeffs =
        gram_table(ws.family(Family::free), base, ws.grid_weights());
    const auto& pg = ws.momentum();
    const int n_p = int(pg.p.size());
    const double a2 = ws.a() * ws.a();
    FamilyTable tab(n_max + 1, ws.grid().n);
    std::vector<cplx> scaled(static_cast<size_t>(n_p));
    for (int n = 0; n <= n_max; ++n) {
        for (int j = 0; j < n_p; ++j) {
            const double mult = 1.0 / std::sqrt(pg.p[size_t(j)] * pg.p[size_t(j)] + a2);
            scaled[size_t(j)] =
                pg.w[size_t(j)] * mult * coeffs[size_t(j) * size_t(n_max + 1) + size_t(n)];
        }
        const std::vector<cplx> row = synthesize(ws.family(Family::transformed), scaled);
        std::copy(row.begin(), row.end(), tab.row(n));
    }
    return tab;
}

SampledState dual_coherent_state(cplx z, int n_max, const SpectralWorkspace& ws) {
    const int need = required_truncation(z, 1e-12);
    if (n_max < need) {
        throw config_error("coherent series: truncation " + std::to_string(n_max) +
                           " too small for |z| = " + std::to_string(std::abs(z)) +
                           ", need at least " + std::to_string(need));
    }
    const std::vector<cplx> coef = coherent_coefficients(z, n_max);
    const FamilyTable tab = dual_basis_table(n_max, ws);
    return SampledState(ws.grid(), ws.time(), synthesize(tab, coef));
}

}  // namespace dcs
