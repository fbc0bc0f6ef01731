#include "dcs/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>

#include "dcs/darboux.hpp"
#include "dcs/deriv.hpp"
#include "dcs/freeparticle.hpp"
#include "dcs/kernels.hpp"

namespace dcs {

double MeasureSpec::eta_density(double x) const {
    return (x * x + a * a - 0.25) / pi;
}

double MeasureSpec::fourier_density(double t) const {
    return std::exp(t * t / 8.0 - a * std::abs(t)) / (2.0 * pi * a);
}

bool MeasureSpec::signed_density() const {
    return kind == MeasureKind::eta && a < 0.5;
}

VerifySetup default_setup(double a, double t) {
    if (!(a > 0.0)) {
        throw config_error("well parameter must be positive");
    }
    VerifySetup s;
    s.a = a;
    s.grid = make_grid(-20.0, 20.0, 2001);
    s.momentum = make_momentum_grid(12.0, 1025);
    s.plane = make_plane_quadrature(7.0, 700, 128);
    s.time = t;
    return s;
}

namespace {

std::string str_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double binom(int n, int k) {
    double acc = 1.0;
    for (int j = 1; j <= k; ++j) {
        acc *= double(n - k + j) / double(j);
    }
    return acc;
}

cplx i_pow(int j) {
    switch (((j % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double inv_sqrt_factorial(int n) {
    return std::exp(-0.5 * log_factorial(n));
}

void check_order(int N, int cap, const char* what) {
    if (N < 1 || N > cap) {
        throw config_error(std::string(what) + ": order must lie in [1, " + std::to_string(cap) +
                           "], got " + std::to_string(N));
    }
}

Eigen::MatrixXcd to_eigen(const std::vector<cplx>& flat, int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = flat[size_t(r) * size_t(cols) + size_t(c)];
        }
    }
    return m;
}

/// smallest series length covering the coherent expansion at radius R:
/// the squared coefficients follow a Poisson profile with mean R^2
int series_truncation(double radius) {
    const double lambda = radius * radius;
    double term = std::exp(-lambda);
    double tail = 1.0 - term;
    int j = 0;
    while (tail > 1e-24 && j < kHardBasisMax - 1) {
        ++j;
        term *= lambda / double(j);
        tail -= term;
    }
    return j;
}

SampledState apply_h1(const SampledState& f, double a) {
    SampledState out = deriv_x(f, 2);
    for (int i = 0; i < f.grid.n; ++i) {
        out.values[size_t(i)] =
            -out.values[size_t(i)] + soliton_potential_value(a, f.grid.x(i)) * f.values[size_t(i)];
    }
    return out;
}

/// <eta_k | phi_n> for k < rows, n < cols, assembled in the momentum
/// representation: eta_k = sum_p w_p N_p^{-1} <psi_p|psi_k> phi_p.
Eigen::MatrixXcd biortho_matrix(const SpectralWorkspace& ws, int rows, int cols) {
    const std::vector<double>& wx = ws.grid_weights();
    const FamilyTable base = free_basis_table(rows - 1, ws.grid(), ws.time());
    const std::vector<cplx> C = gram_table(ws.family(Family::free), base, wx);
    const FamilyTable phi = transformed_basis_table(cols - 1, ws.a(), ws.grid(), ws.time());
    const std::vector<cplx> Gphi = gram_table(ws.family(Family::transformed), phi, wx);

    const MomentumGrid& pg = ws.momentum();
    const int n_p = int(pg.p.size());
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(rows, cols);
    for (int k = 0; k < rows; ++k) {
        for (int n = 0; n < cols; ++n) {
            cplx acc = 0.0;
            for (int p = 0; p < n_p; ++p) {
                const double np = std::sqrt(pg.p[size_t(p)] * pg.p[size_t(p)] + ws.a() * ws.a());
                acc += pg.w[size_t(p)] / np *
                       std::conj(C[size_t(p) * size_t(rows) + size_t(k)]) *
                       Gphi[size_t(p) * size_t(cols) + size_t(n)];
            }
            B(k, n) = acc;
        }
    }
    return B;
}

}  // namespace

Eigen::MatrixXcd gram_S_closed(int N, double a) {
    check_order(N, kHardBasisMax, "closed-form Gram");
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        S(n, n) = (2.0 * n + 1.0) / 4.0 + a * a;
        if (n + 2 < N) {
            const double off = std::sqrt(double(n + 1) * double(n + 2)) / 4.0;
            S(n, n + 2) = off;
            S(n + 2, n) = off;
        }
    }
    return S;
}

GramMatrix gram_S(int N, const VerifySetup& setup) {
    check_order(N, kHardBasisMax, "Gram matrix");
    const FamilyTable phi = transformed_basis_table(N - 1, setup.a, setup.grid, setup.time);
    const std::vector<double> wx = simpson_weights(setup.grid);
    GramMatrix out;
    out.order = N;
    out.basis_tag = BasisTag::phi;
    out.entries = to_eigen(gram_table(phi, phi, wx), N, N);
    return out;
}

GramMatrix gram_S(int N, double a, double t) {
    return gram_S(N, default_setup(a, t));
}

GramMatrix gram_eta(int N, const VerifySetup& setup) {
    check_order(N, kHardBasisMax, "Gram matrix");
    const FamilyTable waves = plane_wave_table(setup.momentum, setup.grid, setup.time);
    const FamilyTable base = free_basis_table(N - 1, setup.grid, setup.time);
    const std::vector<double> wx = simpson_weights(setup.grid);
    const std::vector<cplx> C = gram_table(waves, base, wx);

    const int n_p = int(setup.momentum.p.size());
    GramMatrix out;
    out.order = N;
    out.basis_tag = BasisTag::eta;
    out.entries = Eigen::MatrixXcd::Zero(N, N);
    for (int m = 0; m < N; ++m) {
        for (int n = 0; n < N; ++n) {
            cplx acc = 0.0;
            for (int p = 0; p < n_p; ++p) {
                const double p2 = setup.momentum.p[size_t(p)] * setup.momentum.p[size_t(p)];
                acc += setup.momentum.w[size_t(p)] / (p2 + setup.a * setup.a) *
                       std::conj(C[size_t(p) * size_t(N) + size_t(m)]) *
                       C[size_t(p) * size_t(N) + size_t(n)];
            }
            out.entries(m, n) = acc;
        }
    }
    return out;
}

GramMatrix gram_eta(int N, double a, double t) {
    return gram_eta(N, default_setup(a, t));
}

Eigen::MatrixXcd inverse_gram_S_block(int N, const VerifySetup& setup, int pad) {
    if (pad < 0) {
        throw config_error("inversion padding must be non-negative");
    }
    const int M = N + pad;
    const GramMatrix S = gram_S(M, setup);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S.entries);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
        throw domain_error("Gram inversion is ill-conditioned: eigenvalue range [" + str_g(lo) +
                           ", " + str_g(hi) + "]");
    }
    const Eigen::MatrixXcd inv = S.entries.inverse();
    return inv.topLeftCorner(N, N);
}

cplx moment_eta(int n, int k, const PlaneQuadrature& quad, double a) {
    if (n < 0 || k < 0 || n > 8 || k > 8) {
        throw config_error("plane moment indices must lie in [0, 8]");
    }
    if (quad.radius < 6.0) {
        throw config_error("plane cutoff " + str_g(quad.radius) +
                           " too small for the moment tail; need radius >= 6");
    }
    const MeasureSpec mu{MeasureKind::eta, a};
    const cplx raw = plane_sum(quad, [&](int node) {
        const double x = quad.xs[size_t(node)];
        const double y = quad.ys[size_t(node)];
        const cplx z(x, y);
        const double phi2 = std::exp(-(x * x + y * y));
        cplx zn = 1.0;
        for (int j = 0; j < n; ++j) {
            zn *= z;
        }
        cplx zk = 1.0;
        for (int j = 0; j < k; ++j) {
            zk *= std::conj(z);
        }
        return mu.eta_density(x) * phi2 * zn * zk;
    });
    return raw * inv_sqrt_factorial(n) * inv_sqrt_factorial(k);
}

Eigen::MatrixXcd moment_eta_matrix(int N, const PlaneQuadrature& quad, double a) {
    check_order(N, 9, "moment matrix");
    if (quad.radius < 6.0) {
        throw config_error("plane cutoff " + str_g(quad.radius) +
                           " too small for the moment tail; need radius >= 6");
    }
    const MeasureSpec mu{MeasureKind::eta, a};
    std::vector<double> isf(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        isf[size_t(j)] = inv_sqrt_factorial(j);
    }
    const PlaneNodeEval eval = [&](int node, cplx* av, cplx* bv) {
        const double x = quad.xs[size_t(node)];
        const double y = quad.ys[size_t(node)];
        const cplx z(x, y);
        const double phi = std::exp(-0.5 * (x * x + y * y));
        const double w = mu.eta_density(x);
        cplx zp = 1.0;
        for (int m = 0; m < N; ++m) {
            av[m] = w * phi * zp * isf[size_t(m)];
            bv[m] = phi * zp * isf[size_t(m)];
            zp *= z;
        }
    };
    return to_eigen(plane_matrix_sum(quad, N, N, eval), N, N);
}

PhiMomentResult moment_phi(int n, int k, double a) {
    if (n < 0 || k < 0 || n > 6 || k > 6) {
        throw config_error("Fourier moment indices must lie in [0, 6]");
    }
    if (!(a > 0.0)) {
        throw config_error("well parameter must be positive");
    }
    // integrate out y against e^{-y^2}: (x+iy)^n (x-iy)^k becomes a
    // polynomial in x with Gamma-function coefficients
    const int deg = n + k;
    std::vector<cplx> poly(size_t(deg) + 1, cplx{});
    for (int j = 0; j <= n; ++j) {
        for (int l = 0; l <= k; ++l) {
            if ((j + l) % 2 != 0) {
                continue;  // odd powers of y integrate to zero
            }
            poly[size_t(deg - j - l)] += binom(n, j) * binom(k, l) * i_pow(j) *
                                         std::conj(i_pow(l)) * std::tgamma((j + l + 1) / 2.0);
        }
    }
    // transform of x^m e^{-x^2} is sqrt(pi) (-i/2)^m H_m(t/2) e^{-t^2/4};
    // pair the transform against the Fourier-side density on [-T, T]
    const MeasureSpec mu{MeasureKind::phi, a};
    const auto integrand = [&](double t) {
        const double u = 0.5 * t;
        cplx sum = 0.0;
        double h_prev = 0.0;
        double h_cur = 1.0;
        cplx scale = std::sqrt(pi);
        for (int m = 0; m <= deg; ++m) {
            sum += poly[size_t(m)] * scale * h_cur;
            const double h_next = 2.0 * u * h_cur - 2.0 * double(m) * h_prev;
            h_prev = h_cur;
            h_cur = h_next;
            scale *= cplx(0.0, -0.5);
        }
        return sum * std::exp(-t * t / 4.0) * mu.fourier_density(t);
    };

    const double T = 40.0;
    const int n_side = 4001;  // per half-axis; the density has a kink at 0
    const double h = T / double(n_side - 1);
    const std::vector<double> w = simpson_weights(n_side, h);
    // one Simpson rule per half-axis, split at the kink; the shared node
    // t = 0 correctly picks up an endpoint weight from each side
    cplx acc = 0.0;
    double peak = 0.0;
    double edge = 0.0;
    for (int s : {-1, 1}) {
        for (int i = 0; i < n_side; ++i) {
            const double t = double(s) * h * double(i);
            const cplx v = integrand(t);
            acc += w[size_t(i)] * v;
            peak = std::max(peak, std::abs(v));
            if (i == n_side - 1) {
                edge = std::max(edge, std::abs(v));
            }
        }
    }

    PhiMomentResult out;
    out.tail_level = (peak > 0.0) ? edge / peak : 0.0;
    out.diverged = out.tail_level > 1e-10;
    out.value = acc * inv_sqrt_factorial(n) * inv_sqrt_factorial(k);
    return out;
}

double eta_norm_closed(double a) {
    return std::sqrt(2.0 * pi) / a * std::exp(2.0 * a * a) * std::erfc(std::sqrt(2.0) * a);
}

Eigen::MatrixXcd resolve_identity(BasisTag tag, int N, const PlaneQuadrature& quad,
                                  const VerifySetup& setup) {
    check_order(N, 8, "identity matrix");
    if (tag == BasisTag::phi) {
        throw config_error("identity quadrature runs on the free or eta family");
    }
    std::vector<double> isf(static_cast<size_t>(N));
    for (int j = 0; j < N; ++j) {
        isf[size_t(j)] = inv_sqrt_factorial(j);
    }

    if (tag == BasisTag::free) {
        // <psi_m|psi_z> is exactly the coherent coefficient, so the integrand
        // needs no series truncation at all
        const PlaneNodeEval eval = [&](int node, cplx* av, cplx* bv) {
            const double x = quad.xs[size_t(node)];
            const double y = quad.ys[size_t(node)];
            const cplx z(x, y);
            const double phi = std::exp(-0.5 * (x * x + y * y));
            cplx zp = 1.0;
            for (int m = 0; m < N; ++m) {
                const cplx c = phi * zp * isf[size_t(m)];
                av[m] = c / pi;
                bv[m] = c;
                zp *= z;
            }
        };
        return to_eigen(plane_matrix_sum(quad, N, N, eval), N, N);
    }

    // eta family: expand eta_z in the dual basis and pair against the
    // partner family, I_mn = int dmu_eta <eta_m|eta_z><eta_z|phi_n>
    const int J = series_truncation(quad.radius);
    const SpectralWorkspace ws(setup.a, setup.momentum, setup.grid, setup.time);
    const std::vector<double>& wx = ws.grid_weights();
    const FamilyTable base = free_basis_table(J, setup.grid, setup.time);
    const std::vector<cplx> C = gram_table(ws.family(Family::free), base, wx);
    const int n_p = int(setup.momentum.p.size());
    const int cols = J + 1;

    // rectangular dual Gram <eta_m|eta_j>, m < N, j <= J, in momentum space
    Eigen::MatrixXcd Grect = Eigen::MatrixXcd::Zero(N, cols);
    for (int m = 0; m < N; ++m) {
        for (int j = 0; j < cols; ++j) {
            cplx acc = 0.0;
            for (int p = 0; p < n_p; ++p) {
                const double p2 = setup.momentum.p[size_t(p)] * setup.momentum.p[size_t(p)];
                acc += setup.momentum.w[size_t(p)] / (p2 + setup.a * setup.a) *
                       std::conj(C[size_t(p) * size_t(cols) + size_t(m)]) *
                       C[size_t(p) * size_t(cols) + size_t(j)];
            }
            Grect(m, j) = acc;
        }
    }
    // <eta_k|phi_n>, k <= J, n < N
    const FamilyTable phi = transformed_basis_table(N - 1, setup.a, setup.grid, setup.time);
    const std::vector<cplx> Gphi = gram_table(ws.family(Family::transformed), phi, wx);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(cols, N);
    for (int kk = 0; kk < cols; ++kk) {
        for (int nn = 0; nn < N; ++nn) {
            cplx acc = 0.0;
            for (int p = 0; p < n_p; ++p) {
                const double pp = setup.momentum.p[size_t(p)];
                const double np = std::sqrt(pp * pp + setup.a * setup.a);
                acc += setup.momentum.w[size_t(p)] / np *
                       std::conj(C[size_t(p) * size_t(cols) + size_t(kk)]) *
                       Gphi[size_t(p) * size_t(N) + size_t(nn)];
            }
            B(kk, nn) = acc;
        }
    }

    const MeasureSpec mu{MeasureKind::eta, setup.a};
    const PlaneNodeEval eval = [&](int node, cplx* av, cplx* bv) {
        const double x = quad.xs[size_t(node)];
        const double y = quad.ys[size_t(node)];
        const cplx z(x, y);
        std::vector<cplx> c(static_cast<size_t>(cols));
        c[0] = std::exp(-0.5 * (x * x + y * y));
        for (int j = 1; j < cols; ++j) {
            c[size_t(j)] = c[size_t(j) - 1] * z / std::sqrt(double(j));
        }
        const double w = mu.eta_density(x);
        for (int m = 0; m < N; ++m) {
            cplx acc = 0.0;
            for (int j = 0; j < cols; ++j) {
                acc += Grect(m, j) * c[size_t(j)];
            }
            av[m] = w * acc;
        }
        for (int nn = 0; nn < N; ++nn) {
            cplx acc = 0.0;
            for (int kk = 0; kk < cols; ++kk) {
                acc += c[size_t(kk)] * std::conj(B(kk, nn));
            }
            bv[nn] = acc;
        }
    };
    return to_eigen(plane_matrix_sum(quad, N, N, eval), N, N);
}

std::pair<double, double> riesz_bounds(int N, const VerifySetup& setup) {
    check_order(N, 20, "frame-bound evidence");
    const GramMatrix S = gram_S(N, setup);
    const GramMatrix E = gram_eta(N, setup);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esS(S.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esE(E.entries);
    return {esS.eigenvalues().minCoeff(), esE.eigenvalues().maxCoeff()};
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

namespace {

struct SuiteState {
    const VerifySetup& su;
    double t2;
    std::vector<double> wx;
    std::optional<SpectralWorkspace> ws_primary;

    explicit SuiteState(const VerifySetup& s, double t_secondary)
        : su(s), t2(t_secondary), wx(simpson_weights(s.grid)) {}

    const SpectralWorkspace& workspace() {
        if (!ws_primary) {
            ws_primary.emplace(su.a, su.momentum, su.grid, su.time);
        }
        return *ws_primary;
    }
};

VerificationReport deviation_report(const std::string& name, const std::string& params,
                                    double worst, const std::string& provenance, double tol) {
    VerificationReport r;
    r.name = name;
    r.parameters = params;
    r.computed = worst;
    r.reference = 0.0;
    r.provenance = provenance;
    r.tolerance = tol;
    r.pass = std::abs(worst) <= tol;
    return r;
}

VerificationReport value_report(const std::string& name, const std::string& params,
                                double computed, double reference,
                                const std::string& provenance, double tol) {
    VerificationReport r;
    r.name = name;
    r.parameters = params;
    r.computed = computed;
    r.reference = reference;
    r.provenance = provenance;
    r.tolerance = tol;
    r.pass = std::abs(computed - reference) <= tol;
    return r;
}

double worst_identity_dev(const Eigen::MatrixXcd& M) {
    double worst = 0.0;
    for (int m = 0; m < M.rows(); ++m) {
        for (int n = 0; n < M.cols(); ++n) {
            const double target = (m == n) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(M(m, n) - cplx(target)));
        }
    }
    return worst;
}

double worst_entry_dev(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    double worst = 0.0;
    for (int m = 0; m < A.rows(); ++m) {
        for (int n = 0; n < A.cols(); ++n) {
            worst = std::max(worst, std::abs(A(m, n) - B(m, n)));
        }
    }
    return worst;
}

// --- individual checks -----------------------------------------------------

VerificationReport check_quadrature_gaussian(SuiteState& st, double tol) {
    const double got = plane_sum(st.su.plane, [&](int node) {
                           const double x = st.su.plane.xs[size_t(node)];
                           const double y = st.su.plane.ys[size_t(node)];
                           return cplx(std::exp(-(x * x + y * y)));
                       }).real();
    const double want = pi * (1.0 - std::exp(-st.su.plane.radius * st.su.plane.radius));
    return value_report("quadrature-gaussian",
                        "plane R=" + str_g(st.su.plane.radius) + " x " +
                            std::to_string(st.su.plane.n_radial) + " x " +
                            std::to_string(st.su.plane.n_angular),
                        got, want, "analytic", tol);
}

VerificationReport check_parseval(SuiteState& st, double tol) {
    const FourierResult c = momentum_coefficients(0, st.su.momentum, st.su.grid, st.su.time);
    double total = 0.0;
    for (size_t j = 0; j < c.values.size(); ++j) {
        total += st.su.momentum.w[j] * std::norm(c.values[j]);
    }
    return value_report("parseval", "ground state over momentum window [-" +
                                        str_g(st.su.momentum.cutoff) + ", " +
                                        str_g(st.su.momentum.cutoff) + "]",
                        total, 1.0, "analytic", tol);
}

VerificationReport check_deriv_order(SuiteState&, double tol) {
    const auto worst_err = [](int n_points, int m) {
        const Grid1D g = make_grid(-pi, pi, n_points);
        SampledState s(g, 0.0);
        for (int i = 0; i < g.n; ++i) {
            s.values[size_t(i)] = std::sin(g.x(i));
        }
        const SampledState d = deriv_x(s, m);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i) {
            const double x = g.x(i);
            const double exact = (m == 1) ? std::cos(x) : (m == 2) ? -std::sin(x) : -std::cos(x);
            err = std::max(err, std::abs(d.values[size_t(i)] - exact));
        }
        return err;
    };
    double min_margin = 1e9;
    std::string slopes;
    for (int m = 1; m <= 3; ++m) {
        const double slope =
            std::log(worst_err(33, m) / worst_err(65, m)) / std::log(2.0);
        min_margin = std::min(min_margin, slope - double(deriv_declared_order(m)));
        slopes += (m > 1 ? ", " : "") + std::string("m") + std::to_string(m) + "=" + str_g(slope);
    }
    VerificationReport r = deviation_report(
        "deriv-order", "refinement slopes " + slopes + " vs declared 6/5/4; one-sided: pass iff min margin >= -" + str_g(tol),
        min_margin, "analytic", tol);
    r.pass = min_margin >= -tol;
    return r;
}

VerificationReport check_potential_identity(SuiteState& st, double tol) {
    const std::vector<double> v =
        transformed_potential(soliton_seed(st.su.a), st.su.grid, st.su.time);
    double worst = 0.0;
    for (int i = 0; i < st.su.grid.n; ++i) {
        worst = std::max(worst,
                         std::abs(v[size_t(i)] - soliton_potential_value(st.su.a, st.su.grid.x(i))));
    }
    return deviation_report("potential-identity",
                            "a=" + str_g(st.su.a) + "; t=" + str_g(st.su.time) + "; pointwise over " +
                                std::to_string(st.su.grid.n) + " nodes",
                            worst, "analytic", tol);
}

VerificationReport check_annihilation(SuiteState& st, double tol) {
    const TransformationFunction tf = soliton_seed(st.su.a);
    SampledState u(st.su.grid, st.su.time);
    for (int i = 0; i < st.su.grid.n; ++i) {
        u.values[size_t(i)] = tf.u(st.su.grid.x(i), st.su.time);
    }
    const SampledState lu =
        apply_darboux(u, soliton_operator(st.su.a, st.su.grid, st.su.time), Direction::forward);
    // the seed grows like e^{a|x|}, so the outermost samples dominate any
    // norm while carrying only the lopsided edge-stencil noise; restrict the
    // ratio to the centered-stencil interior
    const int pad = 8;
    double num = 0.0;
    double den = 0.0;
    for (int i = pad; i < st.su.grid.n - pad; ++i) {
        num += std::norm(lu.values[size_t(i)]);
        den += std::norm(u.values[size_t(i)]);
    }
    const double rel = std::sqrt(num / den);
    return deviation_report(
        "annihilation",
        "a=" + str_g(st.su.a) + "; relative norm of the mapped seed, edge cells excluded", rel,
        "exact", tol);
}

VerificationReport check_ladder_suite(SuiteState& st, double tol) {
    double worst = 0.0;
    const double times[3] = {st.su.time, 0.5 * (st.su.time + st.t2), st.t2};
    for (double t : times) {
        for (int n = 0; n <= 10; ++n) {
            const SampledState psi = free_basis_state(n, st.su.grid, t);
            const SampledState up = apply_ladder(psi, Ladder::raise);
            const SampledState target_up =
                std::sqrt(double(n + 1)) * free_basis_state(n + 1, st.su.grid, t);
            worst = std::max(worst, l2_norm(up - target_up));
            if (n > 0) {
                const SampledState dn = apply_ladder(psi, Ladder::lower);
                const SampledState target_dn =
                    std::sqrt(double(n)) * free_basis_state(n - 1, st.su.grid, t);
                worst = std::max(worst, l2_norm(dn - target_dn));
            }
        }
    }
    return deviation_report("ladder-suite", "raise/lower recursion, n <= 10, three times", worst,
                            "analytic", tol);
}

VerificationReport check_coherent_eigen(SuiteState& st, double tol) {
    double worst = 0.0;
    for (double r : {0.7, 1.4, 2.0}) {
        for (double ang : {0.3, 1.9, 4.1}) {
            const cplx z = std::polar(r, ang);
            const int n_max = required_truncation(z);
            const SampledState psi_z = free_coherent_state(z, n_max, st.su.grid, st.su.time);
            const SampledState lowered = apply_ladder(psi_z, Ladder::lower);
            worst = std::max(worst, l2_norm(lowered - z * psi_z));
        }
    }
    return deviation_report("coherent-eigen", "9 coherent labels, |z| <= 2", worst, "analytic",
                            tol);
}

VerificationReport check_hamiltonian_ladder(SuiteState& st, double tol) {
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n) {
        const SampledState psi = free_basis_state(n, st.su.grid, st.su.time);
        const SampledState lap = deriv_x(psi, 2);
        const SampledState sum1 =
            apply_ladder(psi, Ladder::lower) + apply_ladder(psi, Ladder::raise);
        const SampledState sum2 =
            apply_ladder(sum1, Ladder::lower) + apply_ladder(sum1, Ladder::raise);
        const SampledState diff = cplx(-1.0) * lap - cplx(0.25) * sum2;
        worst = std::max(worst, l2_norm(diff));
    }
    return deviation_report("hamiltonian-ladder",
                            "kinetic operator vs squared ladder sum, n <= 8", worst, "two-path",
                            tol);
}

/// central time difference of two snapshots, restamped to the midpoint
SampledState central_difference(const SampledState& plus, const SampledState& minus, double dt,
                                double t_mid) {
    SampledState out(plus.grid, t_mid);
    for (size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = (plus.values[i] - minus.values[i]) / (2.0 * dt);
    }
    return out;
}

VerificationReport check_schrodinger_residual(SuiteState& st, double tol) {
    const double dt = 1e-4;
    double worst = 0.0;
    for (int n : {0, 3, 10}) {
        for (double t : {st.su.time, 0.7}) {
            const SampledState ddt = central_difference(free_basis_state(n, st.su.grid, t + dt),
                                                        free_basis_state(n, st.su.grid, t - dt),
                                                        dt, t);
            const SampledState lap = deriv_x(free_basis_state(n, st.su.grid, t), 2);
            worst = std::max(worst, l2_norm(i_unit * ddt + lap));
        }
    }
    return deviation_report("schrodinger-residual",
                            "free evolution, n in {0,3,10}, dt=1e-4", worst, "analytic", tol);
}

VerificationReport check_intertwining(SuiteState& st, double tol) {
    const double t0 = st.su.time;
    const double dt = 1e-4;
    const cplx z(0.9, -0.6);
    const int n_z = required_truncation(z);
    const auto state_at = [&](int which, double t) {
        if (which == 0) return free_basis_state(0, st.su.grid, t);
        if (which == 1) return free_basis_state(3, st.su.grid, t);
        return free_coherent_state(z, n_z, st.su.grid, t);
    };
    double worst = 0.0;
    for (int which = 0; which < 3; ++which) {
        const SampledState lp = apply_darboux(state_at(which, t0 + dt),
                                              soliton_operator(st.su.a, st.su.grid, t0 + dt),
                                              Direction::forward);
        const SampledState lm = apply_darboux(state_at(which, t0 - dt),
                                              soliton_operator(st.su.a, st.su.grid, t0 - dt),
                                              Direction::forward);
        const SampledState mid = apply_darboux(state_at(which, t0),
                                               soliton_operator(st.su.a, st.su.grid, t0),
                                               Direction::forward);
        const SampledState ddt = central_difference(lp, lm, dt, t0);
        const SampledState lap = deriv_x(mid, 2);
        SampledState res = i_unit * ddt + lap;
        for (int i = 0; i < st.su.grid.n; ++i) {
            res.values[size_t(i)] -=
                soliton_potential_value(st.su.a, st.su.grid.x(i)) * mid.values[size_t(i)];
        }
        worst = std::max(worst, l2_norm(res));
    }
    return deviation_report("intertwining",
                            "mapped evolution residual on two modes and one coherent state, dt=1e-4",
                            worst, "analytic", tol);
}

VerificationReport check_factorization(SuiteState& st, double tol) {
    const DarbouxOperator op = soliton_operator(st.su.a, st.su.grid, st.su.time);
    const double a2 = st.su.a * st.su.a;
    double worst = 0.0;
    for (int n = 0; n <= 8; ++n) {
        const SampledState psi = free_basis_state(n, st.su.grid, st.su.time);
        const SampledState through =
            apply_darboux(apply_darboux(psi, op, Direction::forward), op, Direction::adjoint);
        const SampledState target = cplx(-1.0) * deriv_x(psi, 2) + cplx(a2) * psi;
        worst = std::max(worst, l2_norm(through - target));

        const SampledState phi = transformed_basis_state(n, st.su.a, st.su.grid, st.su.time);
        const SampledState back =
            apply_darboux(apply_darboux(phi, op, Direction::adjoint), op, Direction::forward);
        const SampledState target2 = apply_h1(phi, st.su.a) + cplx(a2) * phi;
        worst = std::max(worst, l2_norm(back - target2));
    }
    return deviation_report("factorization",
                            "both operator orders against the shifted kinetic forms, n <= 8",
                            worst, "two-path", tol);
}

VerificationReport check_bound_state_norm(SuiteState& st, double tol) {
    const SampledState b = bound_state(st.su.a, st.su.grid, st.su.time);
    return value_report("bound-state-norm", "a=" + str_g(st.su.a), l2_norm(b), 1.0, "analytic",
                        tol);
}

VerificationReport check_bound_state_eigen(SuiteState& st, double tol) {
    const SampledState b = bound_state(st.su.a, st.su.grid, st.su.time);
    const SampledState res = apply_h1(b, st.su.a) + cplx(st.su.a * st.su.a) * b;
    return deviation_report("bound-state-eigen", "a=" + str_g(st.su.a) + "; discrete level at -a^2",
                            l2_norm(res), "analytic", tol);
}

VerificationReport check_scattering_eigen(SuiteState& st, double tol) {
    double worst = 0.0;
    for (double p : {0.5, 1.0, 3.0}) {
        const SampledState phi = scattering_state(p, st.su.a, st.su.grid, st.su.time);
        const SampledState res = apply_h1(phi, st.su.a) + cplx(-p * p) * phi;
        worst = std::max(worst, max_abs(res));
    }
    return deviation_report("scattering-eigen", "p in {0.5, 1, 3}, sup-norm residual", worst,
                            "analytic", tol);
}

VerificationReport check_biorthogonality(SuiteState& st, double tol) {
    const Eigen::MatrixXcd B = biortho_matrix(st.workspace(), 9, 9);
    return deviation_report("biorthogonality", "dual pairings, n,k <= 8", worst_identity_dev(B),
                            "analytic", tol);
}

VerificationReport check_isometry(SuiteState& st, double tol) {
    const SpectralWorkspace& ws = st.workspace();
    const SpectralKernel U = spectral_U(ws);
    const int N = 7;
    FamilyTable mapped(N, st.su.grid.n);
    for (int n = 0; n < N; ++n) {
        const SampledState out =
            apply_spectral(free_basis_state(n, st.su.grid, st.su.time), U, ws);
        std::copy(out.values.begin(), out.values.end(), mapped.row(n));
    }
    const Eigen::MatrixXcd G = to_eigen(gram_table(mapped, mapped, st.wx), N, N);
    return deviation_report("isometry", "polar isometry images, m,n <= 6",
                            worst_identity_dev(G), "analytic", tol);
}

VerificationReport check_mtm_inverse(SuiteState& st, double tol) {
    const SpectralWorkspace& ws = st.workspace();
    const SpectralKernel M = spectral_M(ws);
    const SpectralKernel Madj = spectral_M_adjoint(ws);
    const SpectralKernel ginv = spectral_g0_power(ws, -1.0);
    double worst = 0.0;
    double leak = 0.0;
    for (int n = 0; n <= 4; ++n) {
        const SampledState psi = free_basis_state(n, st.su.grid, st.su.time);
        const SampledState mid = apply_spectral(psi, M, ws);
        double bl = 0.0;
        const SampledState left = apply_spectral(mid, Madj, ws, &bl);
        const SampledState right = apply_spectral(psi, ginv, ws);
        worst = std::max(worst, l2_norm(left - right));
        leak = std::max(leak, bl);
    }
    // the inverse multiplier spreads states over a range 1/a, so the finite
    // window clips the intermediate state by ~e^{-a x_max}; the measured
    // boundary amplitude of that state bounds the clipping honestly
    VerificationReport r = deviation_report(
        "mtm-inverse",
        "adjoint-times-map vs inverse multiplier, n <= 4; window leak " + str_g(leak) +
            " added to the bound",
        worst, "two-path", tol);
    r.pass = worst <= tol + leak;
    return r;
}

VerificationReport check_gram_s(SuiteState& st, double tol) {
    const GramMatrix S = gram_S(10, st.su);
    const double worst = worst_entry_dev(S.entries, gram_S_closed(10, st.su.a));
    return deviation_report("gram-s", "order 10 quadrature vs banded closed form", worst,
                            "analytic", tol);
}

VerificationReport check_eta_norm(SuiteState& st, double tol) {
    const GramMatrix E = gram_eta(1, st.su);
    const double spectral = E.entries(0, 0).real();
    const SampledState eta0 = dual_basis_state(0, st.workspace());
    const double direct = inner_product(eta0, eta0).real();
    return value_report("eta-norm-tworoute",
                        "spectral " + str_g(spectral) + ", grid route " + str_g(direct),
                        spectral, eta_norm_closed(st.su.a), "analytic", tol);
}

VerificationReport check_inverse_tworoute(SuiteState& st, double tol) {
    const GramMatrix E = gram_eta(5, st.su);
    const Eigen::MatrixXcd inv = inverse_gram_S_block(5, st.su, 48);
    return deviation_report("inverse-tworoute",
                            "spectral dual Gram vs inversion padded by 48, n,k <= 4",
                            worst_entry_dev(E.entries, inv), "truncated-inversion", tol);
}

VerificationReport check_gram_eta_product(SuiteState& st, double tol) {
    const Eigen::MatrixXcd S = gram_S(16, st.su).entries;
    const Eigen::MatrixXcd E = gram_eta(16, st.su).entries;
    const Eigen::MatrixXcd P = S * E;
    return deviation_report("gram-eta-product",
                            "order-16 product, leading 8x8 block vs identity",
                            worst_identity_dev(P.topLeftCorner(8, 8)), "truncated-inversion", tol);
}

VerificationReport check_moments_eta(SuiteState& st, double tol) {
    const cplx m00 = moment_eta(0, 0, st.su.plane, st.su.a);
    const MeasureSpec mu{MeasureKind::eta, st.su.a};
    std::string params = "(0,0) moment; imag " + str_g(m00.imag());
    if (mu.signed_density()) {
        params += "; signed density (a < 1/2)";
    }
    return value_report("moments-eta", params, m00.real(), st.su.a * st.su.a + 0.25, "analytic",
                        tol);
}

VerificationReport check_moments_eta_grid(SuiteState& st, double tol) {
    const Eigen::MatrixXcd M = moment_eta_matrix(7, st.su.plane, st.su.a);
    const double worst = worst_entry_dev(M, gram_S_closed(7, st.su.a));
    return deviation_report("moments-eta-grid", "plane moments vs closed form, n,k <= 6", worst,
                            "analytic", tol);
}

VerificationReport check_moments_phi(SuiteState& st, double tol) {
    const GramMatrix E = gram_eta(5, st.su);
    double worst = 0.0;
    bool diverged = false;
    for (int n = 0; n <= 4; ++n) {
        for (int k = 0; k <= 4; ++k) {
            const PhiMomentResult r = moment_phi(n, k, st.su.a);
            diverged = diverged || r.diverged;
            worst = std::max(worst, std::abs(r.value - E.entries(n, k)));
        }
    }
    const double kappa =
        moment_phi(0, 0, st.su.a).value.real() / E.entries(0, 0).real();
    VerificationReport r = deviation_report(
        "moments-phi",
        "Fourier pairing vs spectral dual Gram, n,k <= 4; calibration " + str_g(kappa) +
            (diverged ? "; DIVERGENT TAIL" : ""),
        worst, "two-path", tol);
    r.pass = r.pass && !diverged;
    return r;
}

VerificationReport identity_check(SuiteState& st, BasisTag tag, const std::string& name,
                                  double tol) {
    const PlaneQuadrature coarse = make_plane_quadrature(st.su.plane.radius, 160, 48);
    const PlaneQuadrature fine = make_plane_quadrature(st.su.plane.radius, 360, 96);
    const double dev_coarse = worst_identity_dev(resolve_identity(tag, 5, coarse, st.su));
    const double dev_fine = worst_identity_dev(resolve_identity(tag, 5, fine, st.su));
    VerificationReport r = deviation_report(
        name,
        "m,n <= 4; coarse(160x48) dev " + str_g(dev_coarse) + ", fine(360x96) dev " +
            str_g(dev_fine) + "; pass needs fine <= coarse",
        dev_fine, "analytic", tol);
    r.pass = r.pass && dev_fine <= dev_coarse + 1e-12;
    return r;
}

VerificationReport check_identity_free(SuiteState& st, double tol) {
    return identity_check(st, BasisTag::free, "identity-free", tol);
}

VerificationReport check_identity_eta(SuiteState& st, double tol) {
    return identity_check(st, BasisTag::eta, "identity-eta", tol);
}

VerificationReport check_riesz_bounds(SuiteState& st, double tol) {
    const auto [s_min, e_max] = riesz_bounds(10, st.su);
    const double a2 = st.su.a * st.su.a;
    const double violation =
        std::max(std::max(0.0, a2 - s_min), std::max(0.0, e_max - 1.0 / a2));
    return deviation_report("riesz-bounds",
                            "order 10; smallest direct eigenvalue " + str_g(s_min) +
                                " (>= " + str_g(a2) + "), largest dual eigenvalue " +
                                str_g(e_max) + " (<= " + str_g(1.0 / a2) + ")",
                            violation, "analytic", tol);
}

VerificationReport check_time_invariance(SuiteState& st, double tol) {
    VerifySetup alt = st.su;
    alt.time = st.t2;
    const double dev_s =
        worst_entry_dev(gram_S(8, st.su).entries, gram_S(8, alt).entries);
    const SpectralWorkspace ws2(alt.a, alt.momentum, alt.grid, alt.time);
    const double dev_b =
        worst_entry_dev(biortho_matrix(st.workspace(), 5, 5), biortho_matrix(ws2, 5, 5));
    return deviation_report("time-invariance",
                            "Gram and dual pairings at t=" + str_g(st.su.time) + " vs t=" +
                                str_g(st.t2),
                            std::max(dev_s, dev_b), "exact", tol);
}

struct CheckDef {
    const char* name;
    double default_tol;
    VerificationReport (*fn)(SuiteState&, double);
};

const CheckDef kChecks[] = {
    {"quadrature-gaussian", 1e-8, check_quadrature_gaussian},
    {"parseval", 1e-6, check_parseval},
    {"deriv-order", 0.5, check_deriv_order},
    {"potential-identity", 1e-8, check_potential_identity},
    {"annihilation", 1e-11, check_annihilation},
    {"ladder-suite", 1e-6, check_ladder_suite},
    {"coherent-eigen", 1e-8, check_coherent_eigen},
    {"hamiltonian-ladder", 1e-6, check_hamiltonian_ladder},
    {"schrodinger-residual", 2e-5, check_schrodinger_residual},
    {"intertwining", 1e-5, check_intertwining},
    {"factorization", 1e-6, check_factorization},
    {"bound-state-norm", 1e-10, check_bound_state_norm},
    {"bound-state-eigen", 1e-6, check_bound_state_eigen},
    {"scattering-eigen", 1e-5, check_scattering_eigen},
    {"biorthogonality", 1e-6, check_biorthogonality},
    {"isometry", 1e-6, check_isometry},
    {"mtm-inverse", 1e-6, check_mtm_inverse},
    {"gram-s", 1e-8, check_gram_s},
    {"eta-norm-tworoute", 1e-6, check_eta_norm},
    {"inverse-tworoute", 1e-4, check_inverse_tworoute},
    {"gram-eta-product", 1e-4, check_gram_eta_product},
    {"moments-eta", 1e-4, check_moments_eta},
    {"moments-eta-grid", 1e-4, check_moments_eta_grid},
    {"moments-phi", 1e-3, check_moments_phi},
    {"identity-free", 1e-4, check_identity_free},
    {"identity-eta", 1e-3, check_identity_eta},
    {"riesz-bounds", 1e-8, check_riesz_bounds},
    {"time-invariance", 1e-6, check_time_invariance},
};

}  // namespace

std::vector<std::string> suite_check_names() {
    std::vector<std::string> names;
    for (const CheckDef& c : kChecks) {
        names.emplace_back(c.name);
    }
    return names;
}

std::vector<VerificationReport> run_suite(const VerifySetup& setup, double t_secondary,
                                          const std::vector<std::string>& checks,
                                          const std::map<std::string, double>& tolerance_overrides) {
    if (!(setup.a > 0.0)) {
        throw config_error("well parameter must be positive; got " + str_g(setup.a));
    }
    const auto known = [](const std::string& name) {
        for (const CheckDef& c : kChecks) {
            if (name == c.name) {
                return true;
            }
        }
        return false;
    };
    const auto list_names = [] {
        std::string all;
        for (const CheckDef& c : kChecks) {
            all += (all.empty() ? "" : ", ") + std::string(c.name);
        }
        return all;
    };
    for (const std::string& name : checks) {
        if (!known(name)) {
            throw config_error("unknown check '" + name + "'; valid checks: " + list_names());
        }
    }
    for (const auto& [name, tol] : tolerance_overrides) {
        if (!known(name)) {
            throw config_error("tolerance override names unknown check '" + name +
                               "'; valid checks: " + list_names());
        }
        if (!(tol > 0.0)) {
            throw config_error("tolerance override for '" + name + "' must be positive");
        }
    }

    SuiteState state(setup, t_secondary);
    std::vector<VerificationReport> reports;
    for (const CheckDef& c : kChecks) {
        if (!checks.empty() &&
            std::find(checks.begin(), checks.end(), c.name) == checks.end()) {
            continue;
        }
        double tol = c.default_tol;
        if (const auto it = tolerance_overrides.find(c.name); it != tolerance_overrides.end()) {
            tol = it->second;
        }
        const auto start = std::chrono::steady_clock::now();
        VerificationReport r;
        try {
            r = c.fn(state, tol);
        } catch (const std::exception& e) {
            r.name = c.name;
            r.parameters = std::string("error: ") + e.what();
            r.provenance = "analytic";
            r.tolerance = tol;
            r.pass = false;
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace dcs
