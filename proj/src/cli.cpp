#include "qwalk/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/edge_analytics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/plot.hpp"
#include "qwalk/selftest.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/sweep.hpp"
#include "qwalk/table.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/version.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

constexpr double pi = std::numbers::pi;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_plain_number(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    if (t.empty())
        throw invalid_parameter(context + ": empty number");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw invalid_parameter(context + ": cannot parse '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& context) {
    const std::string t = trim(s);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw invalid_parameter(context + ": cannot parse integer '" + s + "'");
    return static_cast<int>(v);
}

struct CliOptions {
    std::string theta1 = "0.2pi";
    std::string theta2 = "-0.15pi";
    double gamma = 0.0;
    int sites = 60;
    std::string boundary = "fbc";
    int nk = 512;
    std::string out;
    std::string format = "csv";
    std::string plot;
    std::string scan;
    std::string grid = "41x41";
    int threads = 0;
};

AxisSpec parse_scan(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
        throw invalid_parameter("--scan expects name=start:stop:count");
    AxisSpec axis;
    axis.name = trim(s.substr(0, eq));
    const std::string rest = s.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw invalid_parameter("--scan expects name=start:stop:count");
    axis.start = parse_angle(rest.substr(0, c1));
    axis.stop = parse_angle(rest.substr(c1 + 1, c2 - c1 - 1));
    axis.count = parse_int(rest.substr(c2 + 1), "--scan count");
    return axis;
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos)
        throw invalid_parameter("--grid expects <n1>x<n2>, e.g. 41x41");
    return {parse_int(s.substr(0, x), "--grid"),
            parse_int(s.substr(x + 1), "--grid")};
}

void deliver(const ResultTable& table, const CliOptions& o,
             std::optional<PlotKind> kind) {
    const Format format = o.format == "json" ? Format::json : Format::csv;
    if (o.out.empty()) {
        std::cout << (format == Format::csv ? to_csv(table) : to_json(table));
    } else {
        write_table(table, format, o.out);
        std::cerr << "wrote " << o.out << "\n";
    }
    if (!o.plot.empty()) {
        if (kind) {
            emit_plot(table, *kind, o.plot);
            std::cerr << "wrote " << o.plot << "\n";
        } else {
            std::cerr << "note: --plot is not supported for this subcommand\n";
        }
    }
}

// True when the point task produced only failure rows.
bool all_rows_failed(const ResultTable& table) {
    const int status = table.column_index("status");
    if (status < 0 || table.rows.empty()) return false;
    for (const auto& row : table.rows)
        if (std::get<std::string>(row[status]) == "ok") return false;
    return true;
}

std::string first_status(const ResultTable& table) {
    const int status = table.column_index("status");
    if (status < 0 || table.rows.empty()) return "";
    return std::get<std::string>(table.rows.front()[status]);
}

int run_verify(const CliOptions& o, const WalkParams& params,
               bool explicit_point) {
    std::vector<WalkParams> sets;
    if (explicit_point) {
        WalkParams p = params;
        p.boundary = Boundary::fbc;
        sets.push_back(p);
    } else {
        // Default check points: the unitary reference and a gain/loss
        // point whose pairs localize at opposite edges.
        sets.push_back({0.2 * pi, -0.15 * pi, 0.0, o.sites, Boundary::fbc});
        sets.push_back({0.2 * pi, 0.15 * pi, 0.2, o.sites, Boundary::fbc});
    }

    ResultTable combined;
    int exit_code = 0;
    for (size_t i = 0; i < sets.size(); ++i) {
        SweepSpec spec;
        spec.task = Task::verify;
        spec.fixed = sets[i];
        spec.n_k = o.nk;
        spec.threads = o.threads;
        ResultTable t = run_sweep(spec);
        if (i == 0) {
            combined = std::move(t);
        } else {
            for (auto& row : t.rows) combined.rows.push_back(std::move(row));
            combined.metadata["theta2"] = "reference-sets";
            combined.metadata["gamma"] = "reference-sets";
        }
    }

    const int c_alpha = combined.column_index("alpha");
    const int c_eta = combined.column_index("eta");
    const int c_fid = combined.column_index("fidelity");
    const int c_res = combined.column_index("eigen_residual");
    const int c_sub = combined.column_index("sublattice_residual");
    const int c_status = combined.column_index("status");
    const int c_t1 = combined.column_index("theta1");
    const int c_t2 = combined.column_index("theta2");
    const int c_g = combined.column_index("gamma");
    for (const auto& row : combined.rows) {
        const std::string status = std::get<std::string>(row[c_status]);
        char line[256];
        if (status == "ok") {
            const double fid = std::get<double>(row[c_fid]);
            const double res = std::get<double>(row[c_res]);
            const double sub = std::get<double>(row[c_sub]);
            const bool good = fid > 1.0 - 1e-5 && res < 1e-7 && sub < 1e-8;
            std::snprintf(line, sizeof(line),
                          "%s (%.4g, %.4g, gamma=%.4g) %s-sector eta=%+lld "
                          "fidelity=%.12f residual=%.3e",
                          good ? "pass" : "FAIL",
                          std::get<double>(row[c_t1]),
                          std::get<double>(row[c_t2]),
                          std::get<double>(row[c_g]),
                          std::get<std::string>(row[c_alpha]).c_str(),
                          std::get<long long>(row[c_eta]), fid, res);
            if (!good) exit_code = 3;
        } else {
            std::snprintf(line, sizeof(line),
                          "SKIP (%.4g, %.4g, gamma=%.4g): %s",
                          std::get<double>(row[c_t1]),
                          std::get<double>(row[c_t2]),
                          std::get<double>(row[c_g]), status.c_str());
            if (exit_code == 0) exit_code = 2;
        }
        std::cerr << line << "\n";
    }
    deliver(combined, o, std::nullopt);
    return exit_code;
}

int run_selftest_cmd() {
    const std::vector<SelfTestResult> results = run_selftest();
    bool all = true;
    double total = 0.0;
    for (const auto& r : results) {
        all = all && r.passed;
        total += r.seconds;
        char line[256];
        std::snprintf(line, sizeof(line), "%s %-26s (%6.2fs) %s",
                      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                      r.detail.c_str());
        std::cout << line << "\n";
    }
    char sum[128];
    std::snprintf(sum, sizeof(sum), "%zu suites, %s, %.2fs total",
                  results.size(), all ? "all passed" : "FAILURES", total);
    std::cout << sum << "\n";
    return all ? 0 : 3;
}

} // namespace

double parse_angle(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw invalid_parameter("empty angle");
    bool has_pi = false;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        has_pi = true;
        s = trim(s.substr(0, s.size() - 2));
    }
    double factor;
    if (has_pi && (s.empty() || s == "+" || s == "-"))
        factor = s == "-" ? -1.0 : 1.0;
    else
        factor = parse_plain_number(s, "angle");
    return has_pi ? factor * pi : factor;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Nonunitary split-step walk toolkit: quasienergy spectra, "
                 "Bloch/non-Bloch winding numbers, analytic edge modes, "
                 "skin-effect and edge-state-transfer diagnostics"};
    app.set_version_flag("--version", version);
    app.set_config("--config", "",
                   "Key-value file mirroring the flags (flags win)");
    app.require_subcommand(1);

    CliOptions o;
    auto* t1 = app.add_option("--theta1", o.theta1,
                              "First coin angle ('pi' literal allowed, e.g. 0.2pi)")
                   ->capture_default_str();
    auto* t2 = app.add_option("--theta2", o.theta2, "Second coin angle")
                   ->capture_default_str();
    auto* g = app.add_option("--gamma", o.gamma, "Gain/loss strength")
                  ->capture_default_str();
    app.add_option("--sites", o.sites, "Lattice sites N (even)")
        ->capture_default_str();
    app.add_option("--boundary", o.boundary, "Boundary condition")
        ->check(CLI::IsMember({"pbc", "fbc"}))
        ->capture_default_str();
    app.add_option("--nk", o.nk, "Momentum grid resolution")
        ->capture_default_str();
    app.add_option("--out", o.out, "Output file (default: stdout)");
    app.add_option("--format", o.format, "Table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--plot", o.plot, "Also render an SVG to this path");
    app.add_option("--scan", o.scan,
                   "Sweep one parameter: name=start:stop:count "
                   "(e.g. theta2=-pi:pi:201)");
    auto* grid_opt = app.add_option("--grid", o.grid,
                                    "Grid resolution n1xn2 for 2-axis maps over "
                                    "(theta1, theta2) in [-pi, pi]^2")
                         ->capture_default_str();
    app.add_option("--threads", o.threads,
                   "Worker threads (0: QWALK_THREADS env or hardware)");

    CLI::App* c_spectrum = app.add_subcommand(
        "spectrum", "Quasienergy spectrum at a point, or along --scan");
    CLI::App* c_phase = app.add_subcommand(
        "phase-diagram", "Winding-number pair over a grid or --scan");
    CLI::App* c_transfer = app.add_subcommand(
        "transfer-map", "Edge-pair transfer classification over a grid or --scan");
    CLI::App* c_edge = app.add_subcommand(
        "edge-modes", "Analytic boundary-mode profiles at a point");
    CLI::App* c_gbz = app.add_subcommand(
        "gbz", "Deformed momentum contour beta = e^gamma e^{ip}");
    CLI::App* c_verify = app.add_subcommand(
        "verify", "Analytic-vs-numeric fidelity suite (exit 3 on failure)");
    CLI::App* c_selftest =
        app.add_subcommand("selftest", "Property-test battery (exit 3 on failure)");
    for (CLI::App* sub : {c_spectrum, c_phase, c_transfer, c_edge, c_gbz,
                          c_verify, c_selftest})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        WalkParams params{parse_angle(o.theta1), parse_angle(o.theta2), o.gamma,
                          o.sites,
                          o.boundary == "pbc" ? Boundary::pbc : Boundary::fbc};

        SweepSpec spec;
        spec.fixed = params;
        spec.n_k = o.nk;
        spec.threads = o.threads;
        const bool has_scan = !o.scan.empty();
        if (has_scan) spec.axis1 = parse_scan(o.scan);

        if (app.got_subcommand(c_spectrum)) {
            spec.task = Task::spectrum_scan;
            const ResultTable table = run_sweep(spec);
            if (!has_scan && all_rows_failed(table)) {
                std::cerr << "error: " << first_status(table) << "\n";
                deliver(table, o, std::nullopt);
                return 2;
            }
            deliver(table, o,
                    has_scan ? PlotKind::scan : PlotKind::scatter_complex);
            return 0;
        }
        if (app.got_subcommand(c_phase) || app.got_subcommand(c_transfer)) {
            spec.task = app.got_subcommand(c_phase) ? Task::phase_diagram
                                                    : Task::transfer_map;
            // Explicit coin angles (and no scan/grid request) mean a
            // single-point classification; --gamma alone reparametrizes
            // the default (theta1, theta2) map.
            const bool explicit_point = t1->count() > 0 || t2->count() > 0;
            std::optional<PlotKind> kind = PlotKind::scan;
            if (!has_scan && (grid_opt->count() > 0 || !explicit_point)) {
                const auto [n1, n2] = parse_grid(o.grid);
                spec.axis1 = AxisSpec{"theta1", -pi, pi, n1};
                spec.axis2 = AxisSpec{"theta2", -pi, pi, n2};
                kind = PlotKind::heatmap;
            } else if (!has_scan) {
                kind = std::nullopt;
            }
            const ResultTable table = run_sweep(spec);
            if (!spec.axis1 && all_rows_failed(table)) {
                std::cerr << "error: " << first_status(table) << "\n";
                deliver(table, o, std::nullopt);
                return 2;
            }
            deliver(table, o, kind);
            return 0;
        }
        if (app.got_subcommand(c_edge)) {
            spec.task = Task::edge_modes;
            const ResultTable table = run_sweep(spec);
            if (!has_scan && all_rows_failed(table)) {
                std::cerr << "error: " << first_status(table) << "\n";
                deliver(table, o, std::nullopt);
                return 2;
            }
            deliver(table, o, PlotKind::profile);
            return 0;
        }
        if (app.got_subcommand(c_gbz)) {
            spec.task = Task::gbz;
            deliver(run_sweep(spec), o, PlotKind::scatter_complex);
            return 0;
        }
        if (app.got_subcommand(c_verify)) {
            const bool explicit_point =
                t1->count() > 0 || t2->count() > 0 || g->count() > 0;
            return run_verify(o, params, explicit_point);
        }
        if (app.got_subcommand(c_selftest)) return run_selftest_cmd();

        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resolution_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const consistency_error& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace qwalk
