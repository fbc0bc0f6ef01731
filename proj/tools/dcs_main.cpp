// Command-line front end: the `potential`, `states`, and `verify` subcommands
// write CSV curves and JSON reports produced by the library. Everything is
// deterministic: rerunning a subcommand with the same configuration writes
// byte-identical files (timing goes to a sidecar that is expected to differ).

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dcs/config.hpp"
#include "dcs/darboux.hpp"
#include "dcs/freeparticle.hpp"
#include "dcs/verify.hpp"

namespace {

using dcs::cplx;
using json = nlohmann::ordered_json;

/// Locale-independent shortest-exact decimal form.
std::string num(double v) {
    char buf[40];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

struct Cli {
    std::string config_path;
    std::optional<double> a;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<double> time;
};

/// Precedence: flags beat the DCS_OUT_DIR environment variable, which beats
/// the config file.
dcs::RunConfig resolve_config(const Cli& cli) {
    dcs::RunConfig c;
    if (!cli.config_path.empty()) {
        c = dcs::load_config(cli.config_path);
    }
    if (const char* env = std::getenv("DCS_OUT_DIR"); env && *env) {
        c.out_dir = env;
    }
    if (cli.a) c.a = *cli.a;
    if (cli.out) c.out_dir = *cli.out;
    if (cli.format) c.format = *cli.format;
    if (cli.time) c.time_primary = *cli.time;
    dcs::validate(c);
    return c;
}

std::filesystem::path prepare_out_dir(const dcs::RunConfig& c) {
    const std::filesystem::path dir(c.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw dcs::config_error("cannot create output directory '" + c.out_dir + "'");
    }
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw dcs::config_error("cannot write '" + path.string() + "'");
    }
    out << content;
    if (!out) {
        throw dcs::config_error("write failed for '" + path.string() + "'");
    }
}

/// One sampled complex curve as CSV rows (header row, comma-separated,
/// '.' decimal point) or as a JSON array of row objects.
std::string curve_document(const std::string& format, const dcs::SampledState& f) {
    if (format == "csv") {
        std::string doc = "x,re,im,abs2\n";
        for (int i = 0; i < f.grid.n; ++i) {
            const cplx v = f.values[size_t(i)];
            doc += num(f.grid.x(i)) + "," + num(v.real()) + "," + num(v.imag()) + "," +
                   num(std::norm(v)) + "\n";
        }
        return doc;
    }
    json rows = json::array();
    for (int i = 0; i < f.grid.n; ++i) {
        const cplx v = f.values[size_t(i)];
        rows.push_back({{"x", f.grid.x(i)},
                        {"re", v.real()},
                        {"im", v.imag()},
                        {"abs2", std::norm(v)}});
    }
    return rows.dump(2) + "\n";
}

json grid_meta(const dcs::RunConfig& c) {
    return {{"x_min", c.x_min}, {"x_max", c.x_max}, {"n_points", c.n_points}};
}

int cmd_potential(const dcs::RunConfig& c) {
    const auto dir = prepare_out_dir(c);
    const dcs::Grid1D grid = dcs::make_grid(c.x_min, c.x_max, c.n_points);
    const dcs::TransformationFunction seed = dcs::soliton_seed(c.a);
    const dcs::SeedReport seed_report = dcs::validate_u(seed, grid, c.time_primary);
    const std::vector<double> v = dcs::transformed_potential(seed, grid, c.time_primary);

    double v_min = v[0];
    double x_at_min = grid.x(0);
    std::string doc = c.format == "csv" ? "x,potential\n" : "";
    json rows = json::array();
    for (int i = 0; i < grid.n; ++i) {
        if (v[size_t(i)] < v_min) {
            v_min = v[size_t(i)];
            x_at_min = grid.x(i);
        }
        if (c.format == "csv") {
            doc += num(grid.x(i)) + "," + num(v[size_t(i)]) + "\n";
        } else {
            rows.push_back({{"x", grid.x(i)}, {"potential", v[size_t(i)]}});
        }
    }
    const std::string ext = c.format == "csv" ? ".csv" : ".json";
    write_file(dir / ("potential" + ext), c.format == "csv" ? doc : rows.dump(2) + "\n");

    const json meta = {
        {"a", c.a},
        {"time", c.time_primary},
        {"grid", grid_meta(c)},
        {"well_depth", v_min},
        {"well_center", x_at_min},
        {"seed_diagnostics",
         {{"ok", seed_report.ok},
          {"reality_residual", seed_report.reality_residual},
          {"evolution_residual", seed_report.evolution_residual}}},
    };
    write_file(dir / "potential_meta.json", meta.dump(2) + "\n");
    std::printf("wrote %s and potential_meta.json to %s (well depth %s at x = %s)\n",
                ("potential" + ext).c_str(), dir.string().c_str(), num(v_min).c_str(),
                num(x_at_min).c_str());
    return 0;
}

cplx parse_label(const std::string& text) {
    const size_t comma = text.find(',');
    try {
        if (comma == std::string::npos) {
            return {std::stod(text), 0.0};
        }
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw dcs::config_error("cannot parse complex label '" + text +
                                "'; expected re or re,im");
    }
}

int cmd_states(const dcs::RunConfig& c, const std::string& which, int index,
               const std::string& z_text, double p) {
    const auto dir = prepare_out_dir(c);
    const dcs::Grid1D grid = dcs::make_grid(c.x_min, c.x_max, c.n_points);
    const double t = c.time_primary;

    const auto check_index = [&](void) {
        if (index < 0 || index > c.basis_max) {
            throw dcs::config_error("index " + std::to_string(index) +
                                    " outside the configured truncation [0, " +
                                    std::to_string(c.basis_max) + "]");
        }
    };
    const auto coherent_truncation = [&](cplx z) {
        const int needed = dcs::required_truncation(z);
        if (needed > c.basis_max) {
            throw dcs::config_error("coherent label |z| = " + num(std::abs(z)) +
                                    " needs truncation N = " + std::to_string(needed) +
                                    ", configured basis_max = " + std::to_string(c.basis_max));
        }
        return needed;
    };
    const auto workspace = [&] {
        return dcs::SpectralWorkspace(c.a, dcs::make_momentum_grid(c.p_cutoff, c.p_nodes), grid,
                                      t);
    };

    dcs::SampledState state;
    std::string stem = "state_" + which;
    json label;
    if (which == "psi_n" || which == "phi_n" || which == "eta_n") {
        check_index();
        if (which == "psi_n") {
            state = dcs::free_basis_state(index, grid, t);
        } else if (which == "phi_n") {
            state = dcs::transformed_basis_state(index, c.a, grid, t);
        } else {
            state = dcs::dual_basis_state(index, workspace());
        }
        stem += std::to_string(index);
        label = {{"index", index}};
    } else if (which == "psi_z" || which == "phi_z" || which == "eta_z") {
        const cplx z = parse_label(z_text);
        const int n_max = coherent_truncation(z);
        if (which == "psi_z") {
            state = dcs::free_coherent_state(z, n_max, grid, t);
        } else if (which == "phi_z") {
            state = dcs::transformed_coherent_state(z, n_max, c.a, grid, t);
        } else {
            state = dcs::dual_coherent_state(z, n_max, workspace());
        }
        label = {{"z_re", z.real()}, {"z_im", z.imag()}, {"series_terms", n_max + 1}};
    } else if (which == "phi_minus1") {
        state = dcs::bound_state(c.a, grid, t);
        label = json::object();
    } else if (which == "phi_p") {
        state = dcs::scattering_state(p, c.a, grid, t);
        label = {{"p", p}};
    } else {
        throw dcs::config_error("unknown state selector '" + which + "'");
    }

    const std::string ext = c.format == "csv" ? ".csv" : ".json";
    write_file(dir / (stem + ext), curve_document(c.format, state));
    json meta = {
        {"selector", which},
        {"a", c.a},
        {"time", t},
        {"grid", grid_meta(c)},
        {"norm_on_grid", dcs::l2_norm(state)},
        {"boundary_fraction", dcs::boundary_fraction(state)},
    };
    meta.update(label);
    write_file(dir / (stem + "_meta.json"), meta.dump(2) + "\n");
    std::printf("wrote %s%s and %s_meta.json to %s\n", stem.c_str(), ext.c_str(), stem.c_str(),
                dir.string().c_str());
    return 0;
}

int cmd_verify(const dcs::RunConfig& c, const std::vector<std::string>& selectors) {
    const auto dir = prepare_out_dir(c);
    std::vector<std::string> checks;
    for (const std::string& s : selectors) {
        if (s == "all") {
            checks.clear();
            break;
        }
        checks.push_back(s);
    }

    const auto start = std::chrono::steady_clock::now();
    const std::vector<dcs::VerificationReport> reports =
        dcs::run_suite(dcs::to_setup(c), c.time_secondary, checks, c.tolerance_overrides);
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report = json::array();
    json timing = {{"total_seconds", total}, {"checks", json::object()}};
    int passed = 0;
    for (const auto& r : reports) {
        report.push_back({{"name", r.name},
                          {"parameters", r.parameters},
                          {"computed", r.computed},
                          {"reference", r.reference},
                          {"provenance", r.provenance},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass}});
        timing["checks"][r.name] = r.seconds;
        passed += r.pass ? 1 : 0;
        std::printf("%-22s %s  computed=%- .10e reference=%- .10e tol=%.0e  %6.2fs\n",
                    r.name.c_str(), r.pass ? "pass" : "FAIL", r.computed, r.reference,
                    r.tolerance, r.seconds);
    }
    write_file(dir / "report.json", report.dump(2) + "\n");
    write_file(dir / "timing.json", timing.dump(2) + "\n");
    write_file(dir / "resolved_config.txt", dcs::serialize_config(c));
    std::printf("%d of %zu checks passed in %.1f s; report.json written to %s\n", passed,
                reports.size(), total, dir.string().c_str());
    return passed == int(reports.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Darboux laboratory for the soliton well: builds the transformation of the free "
        "particle into the -2a^2 sech^2(ax) potential and verifies its coherent-state "
        "identities by quadrature.\n"
        "The output directory comes from --out, else the DCS_OUT_DIR environment variable, "
        "else the config file (default ./out)."};
    app.require_subcommand(1);

    Cli cli;
    app.add_option("--config", cli.config_path, "flat key = value configuration file")
        ->check(CLI::ExistingFile);
    app.add_option("--a", cli.a, "well parameter a > 0 (overrides the config)");
    app.add_option("--out", cli.out, "output directory (overrides DCS_OUT_DIR and the config)");
    app.add_option("--format", cli.format, "curve file format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--time", cli.time, "sampling time (overrides the config)");

    CLI::App* pot = app.add_subcommand("potential", "write the transformed potential curve and "
                                                    "the seed diagnostics");
    pot->fallthrough();

    CLI::App* states = app.add_subcommand("states", "write one sampled state as a curve");
    states->fallthrough();
    std::string which;
    int index = 0;
    std::string z_text = "1";
    double p = 1.0;
    states
        ->add_option("which", which,
                     "state selector: psi_n | phi_n | eta_n | psi_z | phi_z | eta_z | "
                     "phi_minus1 | phi_p")
        ->required()
        ->check(CLI::IsMember({"psi_n", "phi_n", "eta_n", "psi_z", "phi_z", "eta_z",
                               "phi_minus1", "phi_p"}));
    states->add_option("--index", index, "basis index for psi_n / phi_n / eta_n");
    states->add_option("--z", z_text, "coherent label for psi_z / phi_z / eta_z, as re or re,im");
    states->add_option("--p", p, "momentum for phi_p");

    CLI::App* verify = app.add_subcommand("verify", "run verification checks and write "
                                                    "report.json (canonical) plus timing.json");
    verify->fallthrough();
    std::vector<std::string> selectors;
    verify->add_option("--check", selectors,
                       "check name, repeatable; 'all' (the default) runs the whole suite");

    CLI11_PARSE(app, argc, argv);

    try {
        const dcs::RunConfig config = resolve_config(cli);
        if (pot->parsed()) {
            return cmd_potential(config);
        }
        if (states->parsed()) {
            return cmd_states(config, which, index, z_text, p);
        }
        return cmd_verify(config, selectors);
    } catch (const dcs::config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
