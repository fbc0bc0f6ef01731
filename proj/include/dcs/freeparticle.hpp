#pragma once

#include <vector>

#include "dcs/grid.hpp"
#include "dcs/kernels.hpp"
#include "dcs/quadrature.hpp"

namespace dcs {

/// Largest basis index the closed forms accept.
inline constexpr int kHardBasisMax = 256;

/// Relative boundary amplitude above which a state counts as clipped by the
/// finite window.
inline constexpr double kBoundaryThreshold = 1e-8;

// The n-th normalized free basis state: a spreading complex Gaussian times a
// Hermite polynomial of the scaled argument x / sqrt(2(1+t^2)). The closed
// form is the production path; the ladder recursion is kept in the tests as
// an independent oracle.
cplx free_basis_value(int n, double x, double t);
cplx free_basis_deriv_value(int n, double x, double t);  // d/dx, analytic
SampledState free_basis_state(int n, const Grid1D& g, double t);
SampledState free_basis_deriv(int n, const Grid1D& g, double t);

/// Rows n = 0..n_max of the free basis (resp. its x-derivative) on a grid.
FamilyTable free_basis_table(int n_max, const Grid1D& g, double t);
FamilyTable free_basis_deriv_table(int n_max, const Grid1D& g, double t);

/// First-order ladder operators of the free evolution:
/// lowering (i - t) d/dx + i x/2, raising (i + t) d/dx - i x/2.
enum class Ladder { lower, raise };
SampledState apply_ladder(const SampledState& f, Ladder which);

/// Delta-normalized plane wave (2 pi)^{-1/2} exp(i p x - i p^2 t); this
/// normalization is fixed here once and assumed by every spectral integral.
cplx plane_wave_value(double p, double x, double t);
SampledState plane_wave(double p, const Grid1D& g, double t);
FamilyTable plane_wave_table(const MomentumGrid& pg, const Grid1D& g, double t);

/// Smallest N with |z|^N / sqrt(N!) below tol; throws when no N within the
/// hard cap works.
int required_truncation(cplx z, double tol = 1e-12);

/// exp(-|z|^2/2) z^n / sqrt(n!) for n = 0..n_max.
std::vector<cplx> coherent_coefficients(cplx z, int n_max);

/// Truncated coherent series over the free basis; rejects a truncation too
/// small for |z|, naming the required one.
SampledState free_coherent_state(cplx z, int n_max, const Grid1D& g, double t);

/// Plane-wave analysis coefficients <psi_p|f> over the momentum nodes.
struct FourierResult {
    std::vector<cplx> values;
    bool truncated = false;       // boundary amplitude above threshold
    double boundary_level = 0.0;  // relative boundary amplitude seen
};
FourierResult fourier_coefficients(const SampledState& f, const MomentumGrid& pg);

/// <psi_p|psi_n> over the momentum nodes, by grid quadrature.
FourierResult momentum_coefficients(int n, const MomentumGrid& pg, const Grid1D& g, double t);

}  // namespace dcs
