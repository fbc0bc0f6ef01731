#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "dcs/verify.hpp"

namespace dcs {

/// Every knob of a run, with working defaults. Serializes to and from a flat
/// key = value file; unknown keys are rejected by name.
struct RunConfig {
    double a = 1.0;

    double x_min = -20.0;
    double x_max = 20.0;
    int n_points = 2001;

    int basis_max = 48;  // coherent-series truncation ceiling

    double p_cutoff = 12.0;
    int p_nodes = 1025;

    double plane_radius = 7.0;
    int plane_radial = 700;
    int plane_angular = 128;

    double time_primary = 0.0;
    double time_secondary = 1.3;

    std::string out_dir = "out";
    std::string format = "csv";  // curve files; reports are always JSON

    /// Per-check tolerance overrides, keyed by check name
    /// (file keys carry a tol_ prefix: tol_gram-s = 1e-7).
    std::map<std::string, double> tolerance_overrides;

    bool operator==(const RunConfig&) const = default;
};

/// Throws config_error naming the offending field.
void validate(const RunConfig& c);

/// Parse a flat key = value document ('#' starts a comment, blank lines
/// ignored, later keys win). Unknown keys and malformed values are rejected
/// with the line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Full round-trip form: every field appears, defaults included.
std::string serialize_config(const RunConfig& c);

/// The discretization the verification suite runs on.
VerifySetup to_setup(const RunConfig& c);

}  // namespace dcs
