#pragma once

#include <functional>
#include <vector>

#include "dcs/grid.hpp"

namespace dcs {

/// Composite-Simpson weights (including dx) for a uniform grid.
/// An odd interval count is handled with a 3/8 rule on the first three cells.
std::vector<double> simpson_weights(const Grid1D& g);

/// Composite-Simpson weights for n points with spacing h on any uniform axis.
std::vector<double> simpson_weights(int n, double h);

/// L2 scalar product <f|g> = integral conj(f) g dx by composite Simpson.
/// The conjugate goes on the first argument.
cplx inner_product(const SampledState& f, const SampledState& g);

double l2_norm(const SampledState& f);

/// Momentum nodes: uniform p in [-P, P] with trapezoid weights.
struct MomentumGrid {
    std::vector<double> p;
    std::vector<double> w;
    double cutoff = 0.0;
};

MomentumGrid make_momentum_grid(double cutoff, int n_nodes);

/// Polar quadrature over the disk |z| <= R: Simpson in r (with the r dr
/// Jacobian folded into the weight), trapezoid in the angle.
struct PlaneQuadrature {
    double radius = 0.0;
    int n_radial = 0;
    int n_angular = 0;

    std::vector<double> xs;  // flattened node coordinates, z = x + i y
    std::vector<double> ys;
    std::vector<double> ws;  // non-negative weights, sum ~ pi R^2

    /// Nodes are stored ring by ring (fixed radius, angle varying) so that
    /// reductions can accumulate per ring and combine rings in a fixed order.
    int ring_length() const { return n_angular; }
    int n_rings() const { return n_radial + 1; }
};

PlaneQuadrature make_plane_quadrature(double radius, int n_radial, int n_angular);

}  // namespace dcs
