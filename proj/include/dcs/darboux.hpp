#pragma once

#include <functional>
#include <vector>

#include "dcs/freeparticle.hpp"
#include "dcs/grid.hpp"
#include "dcs/kernels.hpp"
#include "dcs/quadrature.hpp"

namespace dcs {

/// Seed solution of the free evolution from which the first-order operator is
/// built, callable at any (x, t).
struct TransformationFunction {
    std::function<cplx(double, double)> u;
    double factorization_energy = 0.0;  // -a^2 for the soliton seed
};

/// u = cosh(a x) e^{i a^2 t}; the seed behind the sech^2 well.
TransformationFunction soliton_seed(double a);

/// u = e^{i p x - i p^2 t}; degenerate seed, leaves the potential flat.
TransformationFunction plane_wave_seed(double p);

/// Validity diagnostics for a seed: the reality condition (the third
/// x-derivative of ln(u/conj u) must vanish) and the evolution-equation
/// residual, both maxima over the grid. Rejects a seed whose modulus dips to
/// zero, naming the location.
struct SeedReport {
    double reality_residual = 0.0;
    double evolution_residual = 0.0;  // relative, |r| / (1 + |u|) pointwise
    bool ok = false;
};
SeedReport validate_u(const TransformationFunction& tf, const Grid1D& g, double t,
                      double tol = 1e-6);

/// First-order operator L = gauge * (log_derivative + d/dx) sampled at one
/// time; log_derivative holds -u_x/u.
struct DarbouxOperator {
    Grid1D grid;
    double time = 0.0;
    std::vector<cplx> log_derivative;
    cplx gauge = 1.0;
};

/// Build the operator from a validated seed; the gauge factor integrates
/// twice the imaginary part of (ln u)_xx from time 0 (fixed to 1 there).
DarbouxOperator darboux_from_u(const TransformationFunction& tf, const Grid1D& g, double t);

/// Exact soliton specialization: log_derivative = -a tanh(a x), gauge 1.
DarbouxOperator soliton_operator(double a, const Grid1D& g, double t);

enum class Direction { forward, adjoint };

/// forward: gauge (c f + f'); adjoint: conj(gauge) (conj(c) f - f').
SampledState apply_darboux(const SampledState& f, const DarbouxOperator& op, Direction d);

/// V1 = V0 - (ln|u|^2)_xx on the grid (V0 = 0 throughout).
std::vector<double> transformed_potential(const TransformationFunction& tf, const Grid1D& g,
                                          double t);

/// Closed form of the transformed potential for the soliton seed.
double soliton_potential_value(double a, double x);

/// Normalized bound state sqrt(a/2) e^{-i a^2 t} / cosh(a x).
cplx bound_state_value(double a, double x, double t);
SampledState bound_state(double a, const Grid1D& g, double t);

/// Delta-normalized scattering state (p^2+a^2)^{-1/2} (-a tanh(a x) + i p) psi_p.
cplx scattering_state_value(double p, double a, double x, double t);
SampledState scattering_state(double p, double a, const Grid1D& g, double t);

/// Transformed discrete basis, by the analytic route
/// -a tanh(a x) psi_n + psi_n' (no stencil error).
SampledState transformed_basis_state(int n, double a, const Grid1D& g, double t);
FamilyTable transformed_basis_table(int n_max, double a, const Grid1D& g, double t);

/// Coherent series over the transformed basis.
SampledState transformed_coherent_state(cplx z, int n_max, double a, const Grid1D& g, double t);

// ---------------------------------------------------------------------------
// Spectral operators: every operator built from the continuum families is a
// momentum integral  integral dp multiplier(p) |out_p><in_p| , evaluated by
// quadrature over the momentum nodes. No dense operator matrix is ever formed.

/// Which delta-normalized family a kernel analyses against / synthesizes from.
enum class Family { free, transformed };

/// Precomputed family tables and weights shared by every spectral apply at
/// one (a, grid, time, momentum grid).
class SpectralWorkspace {
  public:
    SpectralWorkspace(double a, const MomentumGrid& pg, const Grid1D& g, double t);

    double a() const { return a_; }
    double time() const { return time_; }
    const Grid1D& grid() const { return grid_; }
    const MomentumGrid& momentum() const { return pg_; }
    const FamilyTable& family(Family f) const;
    const std::vector<double>& grid_weights() const { return wx_; }

  private:
    double a_;
    double time_;
    Grid1D grid_;
    MomentumGrid pg_;
    std::vector<double> wx_;
    FamilyTable free_;
    FamilyTable transformed_;
};

struct SpectralKernel {
    Family in = Family::free;
    Family out = Family::free;
    std::vector<cplx> multiplier;  // one entry per momentum node
};

SpectralKernel spectral_M(const SpectralWorkspace& ws);          // N_p^{-1}, free -> transformed
SpectralKernel spectral_M_adjoint(const SpectralWorkspace& ws);  // N_p^{-1}, transformed -> free
SpectralKernel spectral_U(const SpectralWorkspace& ws);          // 1, free -> transformed
SpectralKernel spectral_U_adjoint(const SpectralWorkspace& ws);  // 1, transformed -> free
SpectralKernel spectral_L(const SpectralWorkspace& ws);          // N_p, free -> transformed
SpectralKernel spectral_L_adjoint(const SpectralWorkspace& ws);  // N_p, transformed -> free
SpectralKernel spectral_g0_power(const SpectralWorkspace& ws, double s);  // (p^2+a^2)^s

/// One spectral apply; boundary_level (if given) receives the relative
/// boundary amplitude of f, the finite-window truncation diagnostic.
SampledState apply_spectral(const SampledState& f, const SpectralKernel& k,
                            const SpectralWorkspace& ws, double* boundary_level = nullptr);

/// Dual basis eta_n: the inverse-adjoint image of the free basis.
SampledState dual_basis_state(int n, const SpectralWorkspace& ws);
FamilyTable dual_basis_table(int n_max, const SpectralWorkspace& ws);

/// Coherent series over the dual basis.
SampledState dual_coherent_state(cplx z, int n_max, const SpectralWorkspace& ws);

}  // namespace dcs
