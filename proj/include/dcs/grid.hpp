#pragma once

#include <vector>

#include "dcs/common.hpp"

namespace dcs {

/// Uniform spatial grid on [x_min, x_max] with n points, x_i = x_min + i*dx.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;
    double dx = 0.0;

    double x(int i) const { return x_min + i * dx; }
    std::vector<double> points() const;

    bool operator==(const Grid1D&) const = default;
};

/// Builds a uniform grid. Rejects reversed bounds and n < 16.
Grid1D make_grid(double x_min, double x_max, int n);

/// Complex wavefunction samples at a fixed time, tied to a grid.
struct SampledState {
    Grid1D grid;
    double time = 0.0;
    std::vector<cplx> values;

    SampledState() = default;
    SampledState(const Grid1D& g, double t);
    SampledState(const Grid1D& g, double t, std::vector<cplx> v);

    int size() const { return grid.n; }
    cplx& operator[](int i) { return values[i]; }
    const cplx& operator[](int i) const { return values[i]; }
};

SampledState operator+(const SampledState& f, const SampledState& g);
SampledState operator-(const SampledState& f, const SampledState& g);
SampledState operator*(cplx c, const SampledState& f);

/// max_i |f_i|
double max_abs(const SampledState& f);

/// max(|f(x_min)|, |f(x_max)|) / max_i |f_i|; 0 for the zero state.
/// Used to detect states that have not decayed inside the window.
double boundary_fraction(const SampledState& f);

/// Checks that two states live on the same grid at the same time.
void require_compatible(const SampledState& f, const SampledState& g);

}  // namespace dcs
