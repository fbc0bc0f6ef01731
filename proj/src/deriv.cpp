#include "dcs/deriv.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcs {

std::vector<double> fd_weights(int m, const std::vector<double>& nodes, double x0) {
    const int nn = int(nodes.size());
    if (m < 0) {
        throw config_error("fd_weights: derivative order must be non-negative");
    }
    if (nn <= m) {
        throw config_error("fd_weights: need more than " + std::to_string(m) + " nodes");
    }
    // d[k][nu]: weight of node nu in the k-th derivative, grown one node at a time
    std::vector<std::vector<double>> d(size_t(m) + 1, std::vector<double>(size_t(nn), 0.0));
    d[0][0] = 1.0;
    double c1 = 1.0;
    for (int n = 1; n < nn; ++n) {
        const std::vector<std::vector<double>> old = d;
        double c2 = 1.0;
        for (int nu = 0; nu < n; ++nu) {
            const double c3 = nodes[size_t(n)] - nodes[size_t(nu)];
            if (c3 == 0.0) {
                throw config_error("fd_weights: nodes must be distinct");
            }
            c2 *= c3;
            for (int k = 0; k <= std::min(n, m); ++k) {
                const double lower = (k > 0) ? old[size_t(k) - 1][size_t(nu)] : 0.0;
                d[size_t(k)][size_t(nu)] =
                    ((nodes[size_t(n)] - x0) * old[size_t(k)][size_t(nu)] - double(k) * lower) / c3;
            }
        }
        for (int k = 0; k <= std::min(n, m); ++k) {
            const double lower = (k > 0) ? old[size_t(k) - 1][size_t(n) - 1] : 0.0;
            d[size_t(k)][size_t(n)] =
                c1 / c2 * (double(k) * lower - (nodes[size_t(n) - 1] - x0) * old[size_t(k)][size_t(n) - 1]);
        }
        c1 = c2;
    }
    return d[size_t(m)];
}

int deriv_declared_order(int m) {
    switch (m) {
        case 1: return 6;
        case 2: return 5;
        case 3: return 4;
        default:
            throw config_error("derivative order must be 1, 2, or 3, got " + std::to_string(m));
    }
}

namespace {

// Two stencil families: wide centered windows in the interior (high order,
// small weights), short windows near the edges. One-sided weights grow fast
// with window size and multiply the per-sample rounding noise, so the edge
// windows stay short; the declared global orders come from those edges.
constexpr int kWide = 11;
constexpr int kEdge = 7;

std::vector<double> uniform_row(int m, int n_points, int pos, double dx) {
    std::vector<double> nodes(static_cast<size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        nodes[size_t(j)] = dx * double(j - pos);
    }
    return fd_weights(m, nodes, 0.0);
}

template <class T>
std::vector<T> deriv_windowed(const std::vector<T>& f, double dx, int m) {
    const int n = int(f.size());
    deriv_declared_order(m);  // validates m
    if (n < kWide) {
        throw config_error("derivative needs at least " + std::to_string(kWide) + " samples");
    }
    if (!(dx > 0.0)) {
        throw config_error("derivative: spacing must be positive");
    }
    std::array<std::vector<double>, kEdge> edge_rows;
    for (int pos = 0; pos < kEdge; ++pos) {
        edge_rows[size_t(pos)] = uniform_row(m, kEdge, pos, dx);
    }
    const std::vector<double> wide_row = uniform_row(m, kWide, kWide / 2, dx);

    std::vector<T> out(f.size());
    const int wide_half = kWide / 2;
    const int edge_half = kEdge / 2;
    for (int i = 0; i < n; ++i) {
        const double* w = nullptr;
        int start = 0;
        int len = 0;
        if (i >= wide_half && i <= n - 1 - wide_half) {
            w = wide_row.data();
            start = i - wide_half;
            len = kWide;
        } else {
            start = std::clamp(i - edge_half, 0, n - kEdge);
            w = edge_rows[size_t(i - start)].data();
            len = kEdge;
        }
        // stencil weights sum to zero, so subtracting the center sample keeps
        // rounding noise proportional to the local variation
        const T center = f[size_t(i)];
        T acc{};
        for (int j = 0; j < len; ++j) {
            acc += w[j] * (f[size_t(start + j)] - center);
        }
        out[size_t(i)] = acc;
    }
    return out;
}

}  // namespace

std::vector<double> deriv_uniform(const std::vector<double>& f, double dx, int m) {
    return deriv_windowed(f, dx, m);
}

std::vector<cplx> deriv_uniform(const std::vector<cplx>& f, double dx, int m) {
    return deriv_windowed(f, dx, m);
}

SampledState deriv_x(const SampledState& f, int m) {
    return SampledState(f.grid, f.time, deriv_uniform(f.values, f.grid.dx, m));
}

}  // namespace dcs
