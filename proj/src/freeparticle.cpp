#include "dcs/freeparticle.hpp"

#include "dcs/deriv.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dcs {

namespace {

constexpr double kQuarterRootHalf = 0.84089641525371454;  // 2^{-1/4}
constexpr double kQuarterRootPiInv = 0.75112554446494248;  // pi^{-1/4}

// Shared time-dependent pieces of the closed form: every mode is
//   (-i)^n e^{-i n arctan t} (1+it)^{-1/2} 2^{-1/4}
//     * exp(i x^2 t / (4(1+t^2))) * h_n(x / sqrt(2(1+t^2)))
// with h_n the L^2-normalized Hermite functions.
struct ModeFrame {
    double scale;    // sqrt(2(1+t^2))
    double theta_c;  // gauge phase coefficient, theta = theta_c x^2
    cplx root;       // (1+it)^{-1/2}
    double alpha;    // arctan t
};

ModeFrame make_frame(double t) {
    const double one_t2 = 1.0 + t * t;
    ModeFrame f;
    f.scale = std::sqrt(2.0 * one_t2);
    f.theta_c = t / (4.0 * one_t2);
    f.root = 1.0 / std::sqrt(cplx(1.0, t));
    f.alpha = std::atan(t);
    return f;
}

cplx minus_i_pow(int n) {
    switch (n & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

cplx mode_prefactor(const ModeFrame& f, int n) {
    return minus_i_pow(n) * std::polar(1.0, -double(n) * f.alpha) * f.root * kQuarterRootHalf;
}

void check_basis_index(int n) {
    if (n < 0 || n > kHardBasisMax) {
        throw config_error("basis index " + std::to_string(n) + " outside [0, " +
                           std::to_string(kHardBasisMax) + "]");
    }
}

// h_0..h_n at xi (normalized Hermite functions, bounded for all orders)
void hermite_column(double xi, int n, std::vector<double>& h) {
    h.resize(size_t(n) + 1);
    h[0] = kQuarterRootPiInv * std::exp(-0.5 * xi * xi);
    if (n >= 1) {
        h[1] = std::sqrt(2.0) * xi * h[0];
    }
    for (int k = 1; k < n; ++k) {
        h[size_t(k) + 1] = std::sqrt(2.0 / double(k + 1)) * xi * h[size_t(k)] -
                           std::sqrt(double(k) / double(k + 1)) * h[size_t(k) - 1];
    }
}

}  // namespace

cplx free_basis_value(int n, double x, double t) {
    check_basis_index(n);
    const ModeFrame f = make_frame(t);
    const double xi = x / f.scale;
    std::vector<double> h;
    hermite_column(xi, n, h);
    const cplx gauge = std::polar(1.0, f.theta_c * x * x);
    return mode_prefactor(f, n) * gauge * h[size_t(n)];
}

cplx free_basis_deriv_value(int n, double x, double t) {
    check_basis_index(n);
    const ModeFrame f = make_frame(t);
    const double xi = x / f.scale;
    std::vector<double> h;
    hermite_column(xi, n, h);
    const double hn = h[size_t(n)];
    const double hprev = (n > 0) ? h[size_t(n) - 1] : 0.0;
    const double dh = std::sqrt(2.0 * double(n)) * hprev - xi * hn;  // d h_n / d xi
    const cplx gauge = std::polar(1.0, f.theta_c * x * x);
    return mode_prefactor(f, n) * gauge *
           (dh / f.scale + cplx(0.0, 2.0 * f.theta_c * x) * hn);
}

SampledState free_basis_state(int n, const Grid1D& g, double t) {
    check_basis_index(n);
    const ModeFrame f = make_frame(t);
    const cplx pref = mode_prefactor(f, n);
    SampledState out(g, t);
    std::vector<double> h;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        hermite_column(x / f.scale, n, h);
        out.values[size_t(i)] = pref * std::polar(1.0, f.theta_c * x * x) * h[size_t(n)];
    }
    return out;
}

SampledState free_basis_deriv(int n, const Grid1D& g, double t) {
    check_basis_index(n);
    SampledState out(g, t);
    for (int i = 0; i < g.n; ++i) {
        out.values[size_t(i)] = free_basis_deriv_value(n, g.x(i), t);
    }
    return out;
}

FamilyTable free_basis_table(int n_max, const Grid1D& g, double t) {
    check_basis_index(n_max);
    const ModeFrame f = make_frame(t);
    std::vector<cplx> pref(size_t(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        pref[size_t(n)] = mode_prefactor(f, n);
    }
    FamilyTable tab(n_max + 1, g.n);
    std::vector<double> h;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        hermite_column(x / f.scale, n_max, h);
        const cplx gauge = std::polar(1.0, f.theta_c * x * x);
        for (int n = 0; n <= n_max; ++n) {
            tab.row(n)[i] = pref[size_t(n)] * gauge * h[size_t(n)];
        }
    }
    return tab;
}

FamilyTable free_basis_deriv_table(int n_max, const Grid1D& g, double t) {
    check_basis_index(n_max);
    const ModeFrame f = make_frame(t);
    std::vector<cplx> pref(size_t(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) {
        pref[size_t(n)] = mode_prefactor(f, n);
    }
    FamilyTable tab(n_max + 1, g.n);
    std::vector<double> h;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        const double xi = x / f.scale;
        hermite_column(xi, n_max, h);
        const cplx gauge = std::polar(1.0, f.theta_c * x * x);
        const cplx drift(0.0, 2.0 * f.theta_c * x);
        for (int n = 0; n <= n_max; ++n) {
            const double hprev = (n > 0) ? h[size_t(n) - 1] : 0.0;
            const double dh = std::sqrt(2.0 * double(n)) * hprev - xi * h[size_t(n)];
            tab.row(n)[i] = pref[size_t(n)] * gauge * (dh / f.scale + drift * h[size_t(n)]);
        }
    }
    return tab;
}

SampledState apply_ladder(const SampledState& f, Ladder which) {
    const SampledState df = deriv_x(f, 1);
    const double t = f.time;
    const cplx cd = (which == Ladder::lower) ? cplx(0.0, 1.0) - t : cplx(0.0, 1.0) + t;
    const double sx = (which == Ladder::lower) ? 0.5 : -0.5;
    SampledState out(f.grid, t);
    for (int i = 0; i < f.grid.n; ++i) {
        out.values[size_t(i)] =
            cd * df.values[size_t(i)] + cplx(0.0, sx * f.grid.x(i)) * f.values[size_t(i)];
    }
    return out;
}

cplx plane_wave_value(double p, double x, double t) {
    constexpr double norm = 0.39894228040143268;  // (2 pi)^{-1/2}
    return norm * std::polar(1.0, p * x - p * p * t);
}

SampledState plane_wave(double p, const Grid1D& g, double t) {
    SampledState out(g, t);
    for (int i = 0; i < g.n; ++i) {
        out.values[size_t(i)] = plane_wave_value(p, g.x(i), t);
    }
    return out;
}

FamilyTable plane_wave_table(const MomentumGrid& pg, const Grid1D& g, double t) {
    FamilyTable tab(int(pg.p.size()), g.n);
    for (int j = 0; j < tab.n_rows; ++j) {
        const double p = pg.p[size_t(j)];
        cplx* row = tab.row(j);
        for (int i = 0; i < g.n; ++i) {
            row[i] = plane_wave_value(p, g.x(i), t);
        }
    }
    return tab;
}

int required_truncation(cplx z, double tol) {
    if (!(tol > 0.0)) {
        throw config_error("truncation tolerance must be positive");
    }
    const double r = std::abs(z);
    if (r == 0.0) {
        return 1;
    }
    const double log_tol = std::log(tol);
    const double log_r = std::log(r);
    for (int n = 0; n <= kHardBasisMax; ++n) {
        if (double(n) * log_r - 0.5 * log_factorial(n) < log_tol) {
            return n;
        }
    }
    throw config_error("coherent series: |z| = " + std::to_string(r) +
                       " needs a truncation beyond the hard cap " + std::to_string(kHardBasisMax));
}

std::vector<cplx> coherent_coefficients(cplx z, int n_max) {
    check_basis_index(n_max);
    std::vector<cplx> c(size_t(n_max) + 1);
    c[0] = std::exp(-0.5 * std::norm(z));
    for (int n = 0; n < n_max; ++n) {
        c[size_t(n) + 1] = c[size_t(n)] * z / std::sqrt(double(n + 1));
    }
    return c;
}

SampledState free_coherent_state(cplx z, int n_max, const Grid1D& g, double t) {
    const int need = required_truncation(z, 1e-12);
    if (n_max < need) {
        throw config_error("coherent series: truncation " + std::to_string(n_max) +
                           " too small for |z| = " + std::to_string(std::abs(z)) +
                           ", need at least " + std::to_string(need));
    }
    const std::vector<cplx> coef = coherent_coefficients(z, n_max);
    const FamilyTable tab = free_basis_table(n_max, g, t);
    return SampledState(g, t, synthesize(tab, coef));
}

FourierResult fourier_coefficients(const SampledState& f, const MomentumGrid& pg) {
    FourierResult r;
    r.boundary_level = boundary_fraction(f);
    r.truncated = r.boundary_level > kBoundaryThreshold;
    const FamilyTable waves = plane_wave_table(pg, f.grid, f.time);
    r.values = batch_inner(waves, simpson_weights(f.grid), f.values);
    return r;
}

FourierResult momentum_coefficients(int n, const MomentumGrid& pg, const Grid1D& g, double t) {
    return fourier_coefficients(free_basis_state(n, g, t), pg);
}

}  // namespace dcs
