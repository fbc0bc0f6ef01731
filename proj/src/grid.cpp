#include "dcs/grid.hpp"

#include <algorithm>
#include <cmath>

namespace dcs {

std::vector<double> Grid1D::points() const {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = x(i);
    return xs;
}

Grid1D make_grid(double x_min, double x_max, int n) {
    if (!(x_min < x_max))
        throw config_error("make_grid: reversed or empty bounds [" + std::to_string(x_min) +
                           ", " + std::to_string(x_max) + "]");
    if (n < 16)
        throw config_error("make_grid: need at least 16 points, got " + std::to_string(n));
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n = n;
    g.dx = (x_max - x_min) / double(n - 1);
    return g;
}

SampledState::SampledState(const Grid1D& g, double t) : grid(g), time(t), values(g.n, cplx{}) {}

SampledState::SampledState(const Grid1D& g, double t, std::vector<cplx> v)
    : grid(g), time(t), values(std::move(v)) {
    if (int(values.size()) != grid.n)
        throw config_error("SampledState: value count " + std::to_string(values.size()) +
                           " does not match grid size " + std::to_string(grid.n));
}

void require_compatible(const SampledState& f, const SampledState& g) {
    if (!(f.grid == g.grid)) throw domain_error("states live on different grids");
    if (std::abs(f.time - g.time) > 1e-12) throw domain_error("states sampled at different times");
}

SampledState operator+(const SampledState& f, const SampledState& g) {
    require_compatible(f, g);
    SampledState out(f.grid, f.time);
    for (int i = 0; i < f.size(); ++i) out[i] = f[i] + g[i];
    return out;
}

SampledState operator-(const SampledState& f, const SampledState& g) {
    require_compatible(f, g);
    SampledState out(f.grid, f.time);
    for (int i = 0; i < f.size(); ++i) out[i] = f[i] - g[i];
    return out;
}

SampledState operator*(cplx c, const SampledState& f) {
    SampledState out(f.grid, f.time);
    for (int i = 0; i < f.size(); ++i) out[i] = c * f[i];
    return out;
}

double max_abs(const SampledState& f) {
    double m = 0.0;
    for (const cplx& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double boundary_fraction(const SampledState& f) {
    double m = max_abs(f);
    if (m == 0.0) return 0.0;
    return std::max(std::abs(f.values.front()), std::abs(f.values.back())) / m;
}

}  // namespace dcs
