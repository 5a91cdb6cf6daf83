#include "qwalk/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include "qwalk/edge_analytics.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/version.hpp"

namespace qwalk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const double nan_value = std::numeric_limits<double>::quiet_NaN();

bool is_axis_name(const std::string& name) {
    return name == "theta1" || name == "theta2" || name == "gamma";
}

void apply_axis(WalkParams& p, const std::string& name, double v) {
    if (name == "theta1")
        p.theta1 = v;
    else if (name == "theta2")
        p.theta2 = v;
    else
        p.gamma = v;
}

void validate_axis(const AxisSpec& axis) {
    if (!is_axis_name(axis.name))
        throw invalid_parameter("sweep axis must be theta1, theta2, or gamma; got '" +
                                axis.name + "'");
    if (axis.count < 2)
        throw invalid_parameter("sweep axis needs at least 2 points");
    if (!(axis.start < axis.stop))
        throw invalid_parameter("sweep axis needs start < stop");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QWALK_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

double axis_value(const AxisSpec& axis, int i) {
    return axis.start + i * (axis.stop - axis.start) / (axis.count - 1);
}

const char* task_name(Task task) {
    switch (task) {
    case Task::spectrum_scan: return "spectrum-scan";
    case Task::phase_diagram: return "phase-diagram";
    case Task::transfer_map: return "transfer-map";
    case Task::gbz: return "gbz";
    case Task::edge_modes: return "edge-modes";
    case Task::verify: return "verify";
    }
    return "?";
}

// Shorthands for row building.
Value R(double v) { return Value(v); }
Value I(long long v) { return Value(v); }
Value S(std::string v) { return Value(std::move(v)); }

void param_columns(ResultTable& t) {
    t.add_column("theta1", ColumnKind::real);
    t.add_column("theta2", ColumnKind::real);
    t.add_column("gamma", ColumnKind::real);
    t.add_column("n_sites", ColumnKind::integer);
}

std::vector<Value> param_values(const WalkParams& p) {
    return {R(p.theta1), R(p.theta2), R(p.gamma),
            I(static_cast<long long>(p.n_sites))};
}

void append(std::vector<Value>& row, std::vector<Value> tail) {
    for (auto& v : tail) row.push_back(std::move(v));
}

using PointRows = std::vector<std::vector<Value>>;

void eval_spectrum(const SweepSpec& spec, const WalkParams& p, PointRows& out) {
    if (p.boundary == Boundary::fbc) {
        const QuasienergySpectrum s = spectrum_fbc(p);
        const SkinReport skin = skin_report(s, 0.2);
        for (size_t i = 0; i < s.energies.size(); ++i) {
            auto row = param_values(p);
            append(row, {I(static_cast<long long>(i)), R(s.energies[i].real()),
                         R(s.energies[i].imag()), R(skin.mean_positions[i]),
                         S("ok")});
            out.push_back(std::move(row));
        }
    } else {
        const QuasienergySpectrum s = spectrum_pbc_bloch(p, spec.n_k);
        for (size_t j = 0; j < s.momenta.size(); ++j)
            for (int band = 0; band < 2; ++band) {
                const complexd e = s.energies[2 * j + band];
                auto row = param_values(p);
                append(row, {I(static_cast<long long>(j)), R(s.momenta[j]),
                             I(band), R(e.real()), R(e.imag()), S("ok")});
                out.push_back(std::move(row));
            }
    }
}

void spectrum_status_row(const SweepSpec& spec, const WalkParams& p,
                         const std::string& message, PointRows& out) {
    auto row = param_values(p);
    if (p.boundary == Boundary::fbc)
        append(row, {I(0), R(nan_value), R(nan_value), R(nan_value), S(message)});
    else
        append(row, {I(0), R(nan_value), I(0), R(nan_value), R(nan_value),
                     S(message)});
    (void)spec;
    out.push_back(std::move(row));
}

void eval_phase(const SweepSpec& spec, const WalkParams& p, PointRows& out) {
    const Contour contour = p.gamma != 0.0 ? Contour::gbz : Contour::bloch;
    const char* cname = contour == Contour::gbz ? "gbz" : "bloch";
    try {
        const InvariantPair inv = invariants(p, contour, spec.n_k);
        auto row = param_values(p);
        append(row, {R(inv.nu0), R(inv.nupi), R(inv.nu), R(inv.nu_prime),
                     S(cname), S("ok")});
        out.push_back(std::move(row));
    } catch (const precondition_error& e) {
        auto row = param_values(p);
        append(row, {R(nan_value), R(nan_value), R(nan_value), R(nan_value),
                     S(cname), S(e.what())});
        out.push_back(std::move(row));
    } catch (const resolution_error& e) {
        auto row = param_values(p);
        append(row, {R(nan_value), R(nan_value), R(nan_value), R(nan_value),
                     S(cname), S(e.what())});
        out.push_back(std::move(row));
    }
}

void eval_transfer(const SweepSpec& spec, const WalkParams& p, PointRows& out) {
    try {
        const TransferClass tc = transfer_classification_with_loop(p, spec.n_k);
        auto row = param_values(p);
        append(row,
               {I(tc.s_zero), I(tc.s_pi), I(static_cast<long long>(tc.region)),
                I(tc.loops->winding_about_zero), I(tc.loops->winding_about_pi),
                I(*tc.loop_agreement ? 1 : 0), S("ok")});
        out.push_back(std::move(row));
    } catch (const precondition_error& e) {
        auto row = param_values(p);
        append(row, {I(0), I(0), I(0), I(0), I(0), I(0), S(e.what())});
        out.push_back(std::move(row));
    } catch (const resolution_error& e) {
        auto row = param_values(p);
        append(row, {I(0), I(0), I(0), I(0), I(0), I(0), S(e.what())});
        out.push_back(std::move(row));
    }
}

void eval_gbz(const SweepSpec& spec, const WalkParams& p, PointRows& out) {
    const std::vector<complexd> beta = gbz_contour(p.gamma, spec.n_k);
    for (size_t j = 0; j < beta.size(); ++j) {
        auto row = param_values(p);
        append(row, {I(static_cast<long long>(j)),
                     R(two_pi * static_cast<double>(j) / spec.n_k),
                     R(beta[j].real()), R(beta[j].imag()), R(std::abs(beta[j]))});
        out.push_back(std::move(row));
    }
}

void eval_edge_modes(const SweepSpec&, const WalkParams& p, PointRows& out) {
    for (const AlphaSector alpha : {AlphaSector::zero, AlphaSector::pi})
        for (const int eta : {1, -1}) {
            const char* aname = alpha == AlphaSector::zero ? "zero" : "pi";
            try {
                const EdgeModeAnalytic mode = analytic_edge_mode(p, alpha, eta);
                for (int site = 1; site <= p.n_sites; ++site) {
                    const double a =
                        site % 2 ? mode.amplitudes_odd[(site - 1) / 2]
                                 : mode.amplitudes_even[site / 2 - 1];
                    auto row = param_values(p);
                    append(row, {S(aname), I(eta), I(site), R(a),
                                 R(mode.t_tilde), S("ok")});
                    out.push_back(std::move(row));
                }
            } catch (const precondition_error& e) {
                auto row = param_values(p);
                append(row, {S(aname), I(eta), I(0), R(nan_value), R(nan_value),
                             S(e.what())});
                out.push_back(std::move(row));
            }
        }
}

void eval_verify(const SweepSpec&, const WalkParams& p, PointRows& out) {
    WalkParams fp = p;
    fp.boundary = Boundary::fbc;
    const QuasienergySpectrum spectrum = spectrum_fbc(fp);
    for (const AlphaSector alpha : {AlphaSector::zero, AlphaSector::pi})
        for (const int eta : {1, -1}) {
            const char* aname = alpha == AlphaSector::zero ? "zero" : "pi";
            auto row = param_values(fp);
            try {
                const FidelityReport rep =
                    verify_against_numeric(fp, alpha, eta, spectrum);
                append(row, {S(aname), I(eta), R(rep.fidelity),
                             R(rep.eigen_residual), R(rep.sublattice_residual),
                             S("ok")});
            } catch (const precondition_error& e) {
                append(row, {S(aname), I(eta), R(nan_value), R(nan_value),
                             R(nan_value), S(e.what())});
            }
            out.push_back(std::move(row));
        }
}

void eval_point(const SweepSpec& spec, const WalkParams& p, PointRows& out) {
    switch (spec.task) {
    case Task::spectrum_scan:
        try {
            eval_spectrum(spec, p, out);
        } catch (const precondition_error& e) {
            spectrum_status_row(spec, p, e.what(), out);
        } catch (const resolution_error& e) {
            spectrum_status_row(spec, p, e.what(), out);
        }
        return;
    case Task::phase_diagram: eval_phase(spec, p, out); return;
    case Task::transfer_map: eval_transfer(spec, p, out); return;
    case Task::gbz: eval_gbz(spec, p, out); return;
    case Task::edge_modes: eval_edge_modes(spec, p, out); return;
    case Task::verify:
        try {
            eval_verify(spec, p, out);
        } catch (const precondition_error& e) {
            auto row = param_values(p);
            append(row, {S("both"), I(0), R(nan_value), R(nan_value),
                         R(nan_value), S(e.what())});
            out.push_back(std::move(row));
        }
        return;
    }
    throw invalid_parameter("unknown sweep task");
}

void build_columns(const SweepSpec& spec, ResultTable& t) {
    param_columns(t);
    switch (spec.task) {
    case Task::spectrum_scan:
        if (spec.fixed.boundary == Boundary::fbc) {
            t.add_column("mode", ColumnKind::integer);
            t.add_complex_column("E");
            t.add_column("mean_position", ColumnKind::real);
        } else {
            t.add_column("k", ColumnKind::integer);
            t.add_column("p", ColumnKind::real);
            t.add_column("band", ColumnKind::integer);
            t.add_complex_column("E");
        }
        t.add_column("status", ColumnKind::text);
        return;
    case Task::phase_diagram:
        t.add_column("nu0", ColumnKind::real);
        t.add_column("nupi", ColumnKind::real);
        t.add_column("nu", ColumnKind::real);
        t.add_column("nuprime", ColumnKind::real);
        t.add_column("contour", ColumnKind::text);
        t.add_column("status", ColumnKind::text);
        return;
    case Task::transfer_map:
        t.add_column("s_zero", ColumnKind::integer);
        t.add_column("s_pi", ColumnKind::integer);
        t.add_column("region", ColumnKind::integer);
        t.add_column("winding_zero", ColumnKind::integer);
        t.add_column("winding_pi", ColumnKind::integer);
        t.add_column("loop_agree", ColumnKind::integer);
        t.add_column("status", ColumnKind::text);
        return;
    case Task::gbz:
        t.add_column("k", ColumnKind::integer);
        t.add_column("p", ColumnKind::real);
        t.add_complex_column("beta");
        t.add_column("modulus", ColumnKind::real);
        return;
    case Task::edge_modes:
        t.add_column("alpha", ColumnKind::text);
        t.add_column("eta", ColumnKind::integer);
        t.add_column("site", ColumnKind::integer);
        t.add_column("amplitude", ColumnKind::real);
        t.add_column("t_tilde", ColumnKind::real);
        t.add_column("status", ColumnKind::text);
        return;
    case Task::verify:
        t.add_column("alpha", ColumnKind::text);
        t.add_column("eta", ColumnKind::integer);
        t.add_column("fidelity", ColumnKind::real);
        t.add_column("eigen_residual", ColumnKind::real);
        t.add_column("sublattice_residual", ColumnKind::real);
        t.add_column("status", ColumnKind::text);
        return;
    }
    throw invalid_parameter("unknown sweep task");
}

void build_metadata(const SweepSpec& spec, ResultTable& t) {
    auto& md = t.metadata;
    md["task"] = task_name(spec.task);
    md["code_version"] = version;
    const bool swept1 = spec.axis1.has_value();
    const bool swept2 = spec.axis2.has_value();
    auto param_str = [&](const std::string& name, double v) {
        if ((swept1 && spec.axis1->name == name) ||
            (swept2 && spec.axis2->name == name))
            return std::string("swept");
        return format_real(v);
    };
    md["theta1"] = param_str("theta1", spec.fixed.theta1);
    md["theta2"] = param_str("theta2", spec.fixed.theta2);
    md["gamma"] = param_str("gamma", spec.fixed.gamma);
    md["n_sites"] = std::to_string(spec.fixed.n_sites);
    md["boundary"] = spec.fixed.boundary == Boundary::fbc ? "fbc" : "pbc";
    md["n_k"] = std::to_string(spec.n_k);
    md["edge_tol"] = "1e-06";
    md["winding_residual_tol"] = "0.05";
    if (swept1) {
        md["axis1"] = spec.axis1->name;
        md["axis1_start"] = format_real(spec.axis1->start);
        md["axis1_stop"] = format_real(spec.axis1->stop);
        md["axis1_count"] = std::to_string(spec.axis1->count);
    }
    if (swept2) {
        md["axis2"] = spec.axis2->name;
        md["axis2_start"] = format_real(spec.axis2->start);
        md["axis2_stop"] = format_real(spec.axis2->stop);
        md["axis2_count"] = std::to_string(spec.axis2->count);
    }

    // Plot schema consumed by emit_plot.
    switch (spec.task) {
    case Task::spectrum_scan:
        if (swept1) {
            md["plot_x"] = spec.axis1->name;
            md["plot_y"] = "E_re";
        }
        return;
    case Task::phase_diagram:
        if (swept1 && swept2) {
            md["plot_x"] = spec.axis1->name;
            md["plot_y"] = spec.axis2->name;
            md["plot_v"] = "nu0";
        } else if (swept1) {
            md["plot_x"] = spec.axis1->name;
            md["plot_y"] = "nu0,nupi";
        }
        return;
    case Task::transfer_map:
        if (swept1 && swept2) {
            md["plot_x"] = spec.axis1->name;
            md["plot_y"] = spec.axis2->name;
            md["plot_v"] = "region";
        } else if (swept1) {
            md["plot_x"] = spec.axis1->name;
            md["plot_y"] = "s_zero,s_pi";
        }
        return;
    case Task::gbz:
        md["plot_x"] = "p";
        md["plot_y"] = "modulus";
        return;
    case Task::edge_modes:
        md["plot_x"] = "site";
        md["plot_y"] = "amplitude";
        return;
    case Task::verify: return;
    }
}

} // namespace

void SweepSpec::validate() const {
    fixed.validate();
    if (axis1) validate_axis(*axis1);
    if (axis2) {
        if (!axis1)
            throw invalid_parameter("axis2 given without axis1");
        validate_axis(*axis2);
        if (axis1->name == axis2->name)
            throw invalid_parameter("the two sweep axes name the same parameter");
    }
    if (n_k < 8) throw invalid_parameter("n_k must be at least 8");
}

ResultTable run_sweep(const SweepSpec& spec) {
    spec.validate();

    const int count1 = spec.axis1 ? spec.axis1->count : 1;
    const int count2 = spec.axis2 ? spec.axis2->count : 1;
    const int n_points = count1 * count2;
    std::vector<WalkParams> points;
    points.reserve(n_points);
    for (int i1 = 0; i1 < count1; ++i1)
        for (int i2 = 0; i2 < count2; ++i2) {
            WalkParams p = spec.fixed;
            if (spec.axis1) apply_axis(p, spec.axis1->name, axis_value(*spec.axis1, i1));
            if (spec.axis2) apply_axis(p, spec.axis2->name, axis_value(*spec.axis2, i2));
            points.push_back(p);
        }

    ResultTable table;
    build_columns(spec, table);
    build_metadata(spec, table);

    std::vector<PointRows> buffers(n_points);
    std::atomic<int> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = cursor.fetch_add(1);
            if (i >= n_points) return;
            try {
                eval_point(spec, points[i], buffers[i]);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    const int threads = std::min(resolve_threads(spec.threads), n_points);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (auto& rows : buffers)
        for (auto& row : rows) table.add_row(std::move(row));
    return table;
}

} // namespace qwalk
