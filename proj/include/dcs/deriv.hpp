#pragma once

#include <vector>

#include "dcs/grid.hpp"

namespace dcs {

/// Guaranteed convergence order of deriv_uniform for derivative order m
/// (6, 5, 4 for m = 1, 2, 3). The short edge stencils set these; the wide
/// centered interior stencils converge considerably faster.
int deriv_declared_order(int m);

/// Weights for the m-th derivative at x0 from arbitrary nodes
/// (Fornberg recursion). nodes.size() must exceed m.
std::vector<double> fd_weights(int m, const std::vector<double>& nodes, double x0);

/// m-th derivative (m = 1, 2, 3) of a uniformly sampled function, accurate to
/// at least deriv_declared_order(m), with short lopsided stencils at the edges.
std::vector<double> deriv_uniform(const std::vector<double>& f, double dx, int m);
std::vector<cplx> deriv_uniform(const std::vector<cplx>& f, double dx, int m);

SampledState deriv_x(const SampledState& f, int m);

}  // namespace dcs
