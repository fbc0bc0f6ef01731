#include "dcs/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>
#include <vector>

#include "dcs/freeparticle.hpp"

namespace dcs {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_real(const std::string& value, int line) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument("");
        }
        return v;
    } catch (const std::exception&) {
        throw config_error("line " + std::to_string(line) + ": expected a number, got '" +
                           value + "'");
    }
}

int parse_int(const std::string& value, int line) {
    int v = 0;
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size()) {
        throw config_error("line " + std::to_string(line) + ": expected an integer, got '" +
                           value + "'");
    }
    return v;
}

struct Field {
    const char* key;
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string real_str(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"a", [](RunConfig& c, const std::string& v, int l) { c.a = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.a); }},
        {"x_min", [](RunConfig& c, const std::string& v, int l) { c.x_min = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.x_min); }},
        {"x_max", [](RunConfig& c, const std::string& v, int l) { c.x_max = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.x_max); }},
        {"n_points", [](RunConfig& c, const std::string& v, int l) { c.n_points = parse_int(v, l); },
         [](const RunConfig& c) { return std::to_string(c.n_points); }},
        {"basis_max", [](RunConfig& c, const std::string& v, int l) { c.basis_max = parse_int(v, l); },
         [](const RunConfig& c) { return std::to_string(c.basis_max); }},
        {"p_cutoff", [](RunConfig& c, const std::string& v, int l) { c.p_cutoff = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.p_cutoff); }},
        {"p_nodes", [](RunConfig& c, const std::string& v, int l) { c.p_nodes = parse_int(v, l); },
         [](const RunConfig& c) { return std::to_string(c.p_nodes); }},
        {"plane_radius",
         [](RunConfig& c, const std::string& v, int l) { c.plane_radius = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.plane_radius); }},
        {"plane_radial",
         [](RunConfig& c, const std::string& v, int l) { c.plane_radial = parse_int(v, l); },
         [](const RunConfig& c) { return std::to_string(c.plane_radial); }},
        {"plane_angular",
         [](RunConfig& c, const std::string& v, int l) { c.plane_angular = parse_int(v, l); },
         [](const RunConfig& c) { return std::to_string(c.plane_angular); }},
        {"time_primary",
         [](RunConfig& c, const std::string& v, int l) { c.time_primary = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.time_primary); }},
        {"time_secondary",
         [](RunConfig& c, const std::string& v, int l) { c.time_secondary = parse_real(v, l); },
         [](const RunConfig& c) { return real_str(c.time_secondary); }},
        {"out_dir", [](RunConfig& c, const std::string& v, int) { c.out_dir = v; },
         [](const RunConfig& c) { return c.out_dir; }},
        {"format", [](RunConfig& c, const std::string& v, int) { c.format = v; },
         [](const RunConfig& c) { return c.format; }},
    };
    return table;
}

std::string known_keys() {
    std::string all;
    for (const Field& f : fields()) {
        all += (all.empty() ? "" : ", ") + std::string(f.key);
    }
    return all + ", tol_<check>";
}

}  // namespace

void validate(const RunConfig& c) {
    if (!(c.a > 0.0)) {
        throw config_error("a must be positive, got " + real_str(c.a));
    }
    if (!(c.x_min < c.x_max)) {
        throw config_error("grid bounds are reversed or equal");
    }
    if (c.n_points < 16) {
        throw config_error("n_points must be at least 16");
    }
    if (c.basis_max < 1 || c.basis_max > kHardBasisMax) {
        throw config_error("basis_max must lie in [1, " + std::to_string(kHardBasisMax) + "]");
    }
    if (!(c.p_cutoff > 0.0) || c.p_nodes < 2) {
        throw config_error("momentum window needs p_cutoff > 0 and p_nodes >= 2");
    }
    if (!(c.plane_radius > 0.0) || c.plane_radial < 2 || c.plane_angular < 4) {
        throw config_error("plane quadrature needs a positive radius, plane_radial >= 2, "
                           "plane_angular >= 4");
    }
    if (c.out_dir.empty()) {
        throw config_error("out_dir must not be empty");
    }
    if (c.format != "json" && c.format != "csv") {
        throw config_error("format must be json or csv, got '" + c.format + "'");
    }
    for (const auto& [name, tol] : c.tolerance_overrides) {
        if (!(tol > 0.0)) {
            throw config_error("tolerance override tol_" + name + " must be positive");
        }
    }
}

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(line_no) + ": expected key = value, got '" +
                               stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.rfind("tol_", 0) == 0) {
            const std::string check = key.substr(4);
            if (check.empty()) {
                throw config_error("line " + std::to_string(line_no) +
                                   ": tolerance override needs a check name after tol_");
            }
            c.tolerance_overrides[check] = parse_real(value, line_no);
            continue;
        }
        bool matched = false;
        for (const Field& f : fields()) {
            if (key == f.key) {
                f.set(c, value, line_no);
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw config_error("line " + std::to_string(line_no) + ": unknown key '" + key +
                               "'; known keys: " + known_keys());
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    for (const Field& f : fields()) {
        os << f.key << " = " << f.get(c) << "\n";
    }
    for (const auto& [name, tol] : c.tolerance_overrides) {
        os << "tol_" << name << " = " << real_str(tol) << "\n";
    }
    return os.str();
}

VerifySetup to_setup(const RunConfig& c) {
    validate(c);
    VerifySetup s;
    s.a = c.a;
    s.grid = make_grid(c.x_min, c.x_max, c.n_points);
    s.momentum = make_momentum_grid(c.p_cutoff, c.p_nodes);
    s.plane = make_plane_quadrature(c.plane_radius, c.plane_radial, c.plane_angular);
    s.time = c.time_primary;
    return s;
}

}  // namespace dcs
