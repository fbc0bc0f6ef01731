#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dcs/common.hpp"
#include "dcs/grid.hpp"
#include "dcs/quadrature.hpp"

namespace dcs {

/// Which family a Gram or identity matrix was built from.
enum class BasisTag { phi, eta, free };

/// Hermitian matrix of pairwise inner products of one basis family.
struct GramMatrix {
    int order = 0;  // entries are order x order
    Eigen::MatrixXcd entries;
    BasisTag basis_tag = BasisTag::phi;
};

/// The three measures the moment and identity integrals run against.
enum class MeasureKind { free, eta, phi };

struct MeasureSpec {
    MeasureKind kind = MeasureKind::free;
    double a = 1.0;

    /// plane density for the eta moments: (x^2 + a^2 - 1/4) / pi
    double eta_density(double x) const;
    /// Fourier-side density pairing the phi moments: exp(t^2/8 - a|t|) / (2 pi a)
    double fourier_density(double t) const;
    /// true when the eta density changes sign (a < 1/2)
    bool signed_density() const;
};

/// One check outcome. `pass` is authoritative: most checks use the default
/// rule |computed - reference| <= tolerance, a few are one-sided or combine
/// several measurements (spelled out in `parameters`).
struct VerificationReport {
    std::string name;
    std::string parameters;
    double computed = 0.0;
    double reference = 0.0;
    std::string provenance;  // how the reference was produced
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;  // wall time; excluded from canonical output
};

/// Everything the verification routines need about the discretization.
struct VerifySetup {
    double a = 1.0;
    Grid1D grid;
    MomentumGrid momentum;
    PlaneQuadrature plane;
    double time = 0.0;
};

/// Default discretization: x on [-20,20] with 2001 points, momentum window
/// [-12,12] with 1025 nodes, plane quadrature R=7 with 700x128 nodes.
VerifySetup default_setup(double a, double t = 0.0);

/// Banded closed form of the phi-family Gram matrix: diagonal (2n+1)/4 + a^2,
/// second off-diagonals sqrt((n+1)(n+2))/4, zero elsewhere.
Eigen::MatrixXcd gram_S_closed(int N, double a);

/// Gram matrix of the transformed family {phi_n}, n < N, by grid quadrature.
GramMatrix gram_S(int N, const VerifySetup& setup);
GramMatrix gram_S(int N, double a, double t = 0.0);

/// Gram matrix of the dual family {eta_n}: momentum quadrature of
/// <psi_n| (p^2+a^2)^{-1} |psi_k> in the free momentum representation.
GramMatrix gram_eta(int N, const VerifySetup& setup);
GramMatrix gram_eta(int N, double a, double t = 0.0);

/// Leading N x N block of the inverse of a padded (N + pad) Gram matrix.
/// Throws domain_error with a condition estimate if the inversion is
/// ill-conditioned.
Eigen::MatrixXcd inverse_gram_S_block(int N, const VerifySetup& setup, int pad = 8);

/// Normalized eta-measure moment (1/sqrt(n! k!)) int dmu_eta |Phi|^2 z^n zbar^k,
/// which reproduces the closed-form Gram entry S_nk. Requires n,k <= 8 and
/// plane cutoff >= 6.
cplx moment_eta(int n, int k, const PlaneQuadrature& quad, double a);

/// All eta moments n,k < N in one sweep (same integrand, shared quadrature).
Eigen::MatrixXcd moment_eta_matrix(int N, const PlaneQuadrature& quad, double a);

struct PhiMomentResult {
    cplx value;
    bool diverged = false;    // Fourier-side integrand failed to decay
    double tail_level = 0.0;  // integrand magnitude at the window edge / peak
};

/// Normalized phi-measure moment via the Fourier pairing: the y-integral is
/// done in closed form against e^{-y^2}, the x-pairing as a t-integral of the
/// transform against the Fourier-side density. Reproduces the inverse Gram
/// entry. Requires n,k <= 6.
PhiMomentResult moment_phi(int n, int k, double a);

/// Closed form of the (0,0) dual Gram entry: sqrt(2 pi)/a e^{2a^2} erfc(sqrt2 a).
double eta_norm_closed(double a);

/// Resolution-of-identity matrix, N x N, by plane quadrature.
/// free: I_mn = int dx dy / pi <psi_m|psi_z><psi_z|psi_n>.
/// eta:  I_mn = int dmu_eta <eta_m|eta_z><eta_z|phi_n> (the coherent family
/// paired against the biorthogonal partners). Both approach the identity.
/// Requires N <= 8.
Eigen::MatrixXcd resolve_identity(BasisTag tag, int N, const PlaneQuadrature& quad,
                                  const VerifySetup& setup);

/// Truncation evidence of the frame bounds: (smallest eigenvalue of the
/// phi Gram matrix, largest eigenvalue of the eta Gram matrix), order N <= 20.
/// The first should stay >= a^2, the second <= 1/a^2.
std::pair<double, double> riesz_bounds(int N, const VerifySetup& setup);

/// Names of every suite check, in execution order.
std::vector<std::string> suite_check_names();

/// Run the full verification suite (or the named subset) and collect one
/// report per check. Individual failures are recorded and the suite
/// continues. Throws config_error before running anything if a <= 0 or a
/// requested name is unknown. `t_secondary` feeds the time-invariance check.
std::vector<VerificationReport> run_suite(
    const VerifySetup& setup, double t_secondary = 1.3,
    const std::vector<std::string>& checks = {},
    const std::map<std::string, double>& tolerance_overrides = {});

}  // namespace dcs
