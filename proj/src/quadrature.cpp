#include "dcs/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dcs {

std::vector<double> simpson_weights(int n, double h) {
    if (n < 4) {
        throw config_error("simpson_weights: need at least 4 points, got " + std::to_string(n));
    }
    if (!(h > 0.0)) {
        throw config_error("simpson_weights: spacing must be positive");
    }
    std::vector<double> w(n, 0.0);
    int first = 0;
    const int intervals = n - 1;
    if (intervals % 2 != 0) {
        // odd interval count: 3/8 rule on the first three cells, Simpson after
        const double c = 3.0 * h / 8.0;
        w[0] += c;
        w[1] += 3.0 * c;
        w[2] += 3.0 * c;
        w[3] += c;
        first = 3;
    }
    const double c = h / 3.0;
    for (int k = first; k + 2 < n; k += 2) {
        w[k] += c;
        w[k + 1] += 4.0 * c;
        w[k + 2] += c;
    }
    return w;
}

std::vector<double> simpson_weights(const Grid1D& g) { return simpson_weights(g.n, g.dx); }

cplx inner_product(const SampledState& f, const SampledState& g) {
    require_compatible(f, g);
    const std::vector<double> w = simpson_weights(f.grid);
    cplx acc = 0.0;
    for (int i = 0; i < f.grid.n; ++i) {
        acc += w[size_t(i)] * std::conj(f.values[size_t(i)]) * g.values[size_t(i)];
    }
    return acc;
}

double l2_norm(const SampledState& f) {
    const std::vector<double> w = simpson_weights(f.grid);
    double acc = 0.0;
    for (int i = 0; i < f.grid.n; ++i) {
        acc += w[size_t(i)] * std::norm(f.values[size_t(i)]);
    }
    return std::sqrt(acc);
}

MomentumGrid make_momentum_grid(double cutoff, int n_nodes) {
    if (!(cutoff > 0.0)) {
        throw config_error("momentum grid: cutoff must be positive");
    }
    if (n_nodes < 16) {
        throw config_error("momentum grid: need at least 16 nodes, got " + std::to_string(n_nodes));
    }
    MomentumGrid m;
    m.cutoff = cutoff;
    m.p.resize(size_t(n_nodes));
    m.w.resize(size_t(n_nodes));
    const double h = 2.0 * cutoff / double(n_nodes - 1);
    for (int k = 0; k < n_nodes; ++k) {
        m.p[size_t(k)] = -cutoff + h * double(k);
        m.w[size_t(k)] = h;
    }
    m.w.front() = 0.5 * h;
    m.w.back() = 0.5 * h;
    return m;
}

PlaneQuadrature make_plane_quadrature(double radius, int n_radial, int n_angular) {
    if (!(radius > 0.0)) {
        throw config_error("plane quadrature: radius must be positive");
    }
    if (n_radial < 8 || n_angular < 8) {
        throw config_error("plane quadrature: need at least 8 radial and 8 angular nodes");
    }
    PlaneQuadrature q;
    q.radius = radius;
    q.n_radial = n_radial;
    q.n_angular = n_angular;

    const double dr = radius / double(n_radial);
    const std::vector<double> wr = simpson_weights(n_radial + 1, dr);
    const double dtheta = 2.0 * pi / double(n_angular);

    const size_t total = size_t(n_radial + 1) * size_t(n_angular);
    q.xs.resize(total);
    q.ys.resize(total);
    q.ws.resize(total);
    size_t idx = 0;
    for (int i = 0; i <= n_radial; ++i) {
        const double r = dr * double(i);
        const double w_ring = wr[size_t(i)] * r * dtheta;  // r dr dtheta
        for (int j = 0; j < n_angular; ++j) {
            const double theta = dtheta * double(j);
            q.xs[idx] = r * std::cos(theta);
            q.ys[idx] = r * std::sin(theta);
            q.ws[idx] = w_ring;
            ++idx;
        }
    }
    return q;
}

}  // namespace dcs
