#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dcs {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx i_unit{0.0, 1.0};

/// Thrown for invalid configuration values (reversed grid bounds, a <= 0,
/// unknown config keys, ...).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical precondition fails (insufficient series
/// truncation, vanishing transformation function, ...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// log(n!) via lgamma; exact enough for n up to a few hundred.
inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

}  // namespace dcs
