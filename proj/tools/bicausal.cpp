// Command-line driver: verify / report / mesh / list.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bicausal/verify.hpp"

using namespace bicausal;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::pair<double, double> parse_params(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::CONFIG_INVALID, "params must be 'kappa,tau': " + s);
    try {
        std::size_t a = 0, b = 0;
        const std::string ks = s.substr(0, comma), ts = s.substr(comma + 1);
        const double k = std::stod(ks, &a), t = std::stod(ts, &b);
        if (a != ks.size() || b != ts.size()) throw std::invalid_argument(s);
        return {k, t};
    } catch (const std::exception&) {
        throw Error(ErrorCode::CONFIG_INVALID, "params must be 'kappa,tau': " + s);
    }
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t a = 0, b = 0;
        const std::string us = s.substr(0, x), vs = s.substr(x + 1);
        const int nu = std::stoi(us, &a), nv = std::stoi(vs, &b);
        if (a != us.size() || b != vs.size()) throw std::invalid_argument(s);
        return {nu, nv};
    } catch (const std::exception&) {
        throw Error(ErrorCode::CONFIG_INVALID, "grid must be NUxNV: " + s);
    }
}

// Parameters for single-surface commands when --params is absent.
std::pair<double, double> default_params_for(const std::string& surface) {
    if (surface.rfind("berger", 0) == 0) return {1, 1};
    if (surface.rfind("su11", 0) == 0) return {-1, 1};
    return {0, 0};
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::CONFIG_INVALID, "cannot write " + path);
    out << text;
}

void print_summary(const SuiteReport& rep) {
    for (const auto& r : rep.identities) {
        const char* verdict = !r.evaluated() ? "SKIP" : r.pass ? "PASS" : "FAIL";
        std::fprintf(stderr, "%s %-18s n=%-5zu max=%.3e tol=%.1e\n", verdict, to_string(r.id), r.samples,
                     r.max_abs_residual, r.tolerance);
    }
    std::size_t failed = 0;
    for (const auto& p : rep.properties) {
        if (p.pass) continue;
        ++failed;
        std::fprintf(stderr, "FAIL %s [%g,%g] %s max=%.3e tol=%.1e\n", p.surface.c_str(), p.kappa, p.tau,
                     p.property.c_str(), p.max_residual, p.tolerance);
    }
    std::fprintf(stderr, "%zu surface runs, %zu property checks (%zu failed), %zu excluded points, %.1f s\n",
                 rep.surfaces.size(), rep.properties.size(), failed, rep.excluded.size(), rep.wall_seconds);
    std::fprintf(stderr, "%s\n", rep.pass ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-metric surface geometry in E^3(k,t) and L^3(k,t)"};
    app.require_subcommand(1);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the identity and property suite");
    std::vector<std::string> v_params, v_ids, v_surfaces, v_tols;
    int v_samples = 16, v_ambient = 64, v_threads = 0;
    std::uint64_t v_seed = 1;
    std::string v_json;
    bool v_no_timing = false, v_quiet = false;
    double v_fd = 0;
    verify->add_option("--params", v_params, "Parameter sets as kappa,tau (repeatable)");
    verify->add_option("--identities", v_ids, "Identity names (default: all)");
    verify->add_option("--surfaces", v_surfaces, "Catalog surface names or file:chart.json (default: catalog)");
    verify->add_option("--samples", v_samples, "Samples per surface and parameter set");
    verify->add_option("--ambient-samples", v_ambient, "Ambient samples per parameter set");
    verify->add_option("--seed", v_seed, "Sampling seed");
    verify->add_option("--tol", v_tols, "Tolerance override NAME=value (repeatable)");
    verify->add_option("--json", v_json, "Write the JSON report here ('-' for stdout)");
    verify->add_option("--fd-step", v_fd, "First-derivative FD step (default 1e-4 or BICAUSAL_FD_STEP)");
    verify->add_option("--threads", v_threads, "Worker threads (0 = all cores)");
    verify->add_flag("--no-timing", v_no_timing, "Omit the timing block from the JSON report");
    verify->add_flag("--quiet", v_quiet, "No summary on stderr");

    // report
    auto* report = app.add_subcommand("report", "Per-point table of a surface over a grid");
    std::string r_surface, r_params, r_grid = "5x5", r_csv;
    report->add_option("surface", r_surface, "Surface name")->required();
    report->add_option("--params", r_params, "kappa,tau");
    report->add_option("--grid", r_grid, "Grid as NUxNV");
    report->add_option("--csv", r_csv, "Output CSV ('-' or omitted for stdout)");

    // mesh
    auto* mesh = app.add_subcommand("mesh", "Export a surface grid as OBJ or CSV");
    std::string m_surface, m_params, m_grid = "20x20", m_format = "obj", m_out;
    mesh->add_option("surface", m_surface, "Surface name")->required();
    mesh->add_option("--params", m_params, "kappa,tau");
    mesh->add_option("--grid", m_grid, "Grid as NUxNV");
    mesh->add_option("--format", m_format, "obj or csv")->check(CLI::IsMember({"obj", "csv"}));
    mesh->add_option("--out", m_out, "Output file ('-' or omitted for stdout)");

    // list
    auto* list = app.add_subcommand("list", "List identities, properties and catalog surfaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify) {
            SuiteConfig cfg;
            for (const auto& p : v_params) cfg.params.push_back(parse_params(p));
            for (const auto& name : v_ids) {
                const auto id = identity_from_string(name);
                if (!id) throw Error(ErrorCode::CONFIG_INVALID, "unknown identity " + name);
                cfg.identities.push_back(*id);
            }
            cfg.surfaces = v_surfaces;
            cfg.samples_per_surface = v_samples;
            cfg.ambient_samples = v_ambient;
            cfg.seed = v_seed;
            cfg.threads = v_threads;
            if (v_fd != 0) cfg.fd_step = v_fd;
            for (const auto& t : v_tols) {
                const auto eq = t.find('=');
                if (eq == std::string::npos) throw Error(ErrorCode::CONFIG_INVALID, "tolerance must be NAME=value");
                try {
                    cfg.tolerance_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
                } catch (const std::exception&) {
                    throw Error(ErrorCode::CONFIG_INVALID, "bad tolerance value in " + t);
                }
            }
            const SuiteReport rep = run_suite(cfg);
            if (!v_json.empty()) write_output(v_json, rep.to_json(!v_no_timing));
            if (!v_quiet) print_summary(rep);
            return rep.pass ? kExitPass : kExitFail;
        }
        if (*report) {
            const auto [k, t] = r_params.empty() ? default_params_for(r_surface) : parse_params(r_params);
            const auto [nu, nv] = parse_grid(r_grid);
            write_output(r_csv, surface_report_csv(r_surface, SpaceParams::make(k, t), nu, nv));
            return kExitPass;
        }
        if (*mesh) {
            const auto [k, t] = m_params.empty() ? default_params_for(m_surface) : parse_params(m_params);
            const auto [nu, nv] = parse_grid(m_grid);
            const MeshFormat fmt = m_format == "csv" ? MeshFormat::CSV : MeshFormat::OBJ;
            write_output(m_out, mesh_export(m_surface, SpaceParams::make(k, t), nu, nv, fmt));
            return kExitPass;
        }
        if (*list) {
            std::cout << "identities:\n";
            for (const auto& info : identity_registry())
                std::cout << "  " << to_string(info.id) << " [" << to_string(info.tier) << "] " << info.formula << "\n";
            std::cout << "properties:\n";
            for (const auto& p : property_names()) std::cout << "  " << p << " (tol " << property_tolerance(p) << ")\n";
            std::cout << "catalog surfaces:\n";
            for (const auto& s : default_surface_names()) std::cout << "  " << s << "\n";
            std::cout << "  file:chart.json\n";
            return kExitPass;
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
