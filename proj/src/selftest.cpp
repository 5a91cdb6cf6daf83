#include "qwalk/selftest.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "qwalk/edge_analytics.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/sweep.hpp"
#include "qwalk/table.hpp"
#include "qwalk/topology.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt_residual(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

struct Check {
    bool passed = true;
    double worst = 0.0;
    std::string note;
    void max_residual(double r, double tol) {
        worst = std::max(worst, r);
        if (!(r < tol)) passed = false;
    }
};

// --- suites ---------------------------------------------------------

Check unitarity_at_gamma_zero() {
    Check c;
    for (const Boundary b : {Boundary::pbc, Boundary::fbc})
        for (const Frame f : {Frame::standard, Frame::shifted})
            for (const auto& [t1, t2] : {std::pair{0.2 * pi, -0.15 * pi},
                                         std::pair{-0.37 * pi, 0.61 * pi}}) {
                WalkParams p{t1, t2, 0.0, 24, b};
                const Matrix u = build_floquet(p, f);
                const double r =
                    (u * u.adjoint() - Matrix::Identity(48, 48)).cwiseAbs().maxCoeff();
                c.max_residual(r, 1e-12);
            }
    return c;
}

Check symmetry_residuals() {
    Check c;
    for (const Boundary b : {Boundary::pbc, Boundary::fbc})
        for (const double gamma : {0.0, 0.2, -0.35}) {
            WalkParams p{0.2 * pi, -0.15 * pi, gamma, 24, b};
            const SymmetryReport rep = check_symmetries(build_floquet(p));
            c.max_residual(rep.sublattice, 1e-8);
            c.max_residual(rep.time_reversal, 1e-8);
        }
    return c;
}

// Deterministic pseudo-random unit phase per (sample, band).
complexd hash_phase(int j, int band) {
    const double x = std::sin((j + 1) * 12.9898 + band * 78.233) * 43758.5453;
    const double frac = x - std::floor(x);
    return std::polar(1.0, 2.0 * pi * frac);
}

Check berry_gauge_invariance() {
    Check c;
    for (const auto& [t1, t2, g, contour] :
         {std::tuple{0.2 * pi, -0.15 * pi, 0.0, Contour::bloch},
          std::tuple{0.2 * pi, 0.5 * pi, 0.2, Contour::gbz}}) {
        WalkParams p{t1, t2, g, 60, Boundary::pbc};
        const BerryPhaseResult plain = berry_phase(p, Frame::standard, contour);
        const BerryPhaseResult gauged =
            berry_phase(p, Frame::standard, contour, 512, hash_phase);
        c.max_residual(std::abs(plain.total - gauged.total), 1e-10);
        c.max_residual(std::abs(plain.phase_plus - gauged.phase_plus), 1e-10);
        c.max_residual(std::abs(plain.phase_minus - gauged.phase_minus), 1e-10);
    }
    return c;
}

Check spectrum_pm_symmetry() {
    Check c;
    // Sublattice symmetry pairs E with -E, i.e. the eigenvalue multiset
    // is closed under lambda -> 1/lambda.
    for (const double gamma : {0.0, 0.2}) {
        WalkParams p{0.2 * pi, -0.15 * pi, gamma, 24, Boundary::fbc};
        const QuasienergySpectrum s = spectrum_fbc(p);
        for (const complexd& ei : s.energies) {
            const complexd li = std::exp(complexd(0, -1) * ei);
            double best = std::numeric_limits<double>::infinity();
            for (const complexd& ej : s.energies) {
                const complexd lj = std::exp(complexd(0, -1) * ej);
                best = std::min(best, std::abs(li * lj - 1.0));
            }
            c.max_residual(best, 1e-8);
        }
    }
    return c;
}

Check wilson_grid_stability() {
    Check c;
    for (const auto& [t1, t2, g, contour] :
         {std::tuple{0.2 * pi, -0.15 * pi, 0.0, Contour::bloch},
          std::tuple{0.3 * pi, 0.6 * pi, 0.2, Contour::gbz}}) {
        WalkParams p{t1, t2, g, 60, Boundary::pbc};
        const double a = berry_phase(p, Frame::standard, contour, 256).total;
        const double b = berry_phase(p, Frame::standard, contour, 512).total;
        c.max_residual(std::abs(a - b), 0.01 * 2 * pi);
    }
    return c;
}

Check profile_geometric_law() {
    Check c;
    for (const int eta : {1, -1})
        for (const AlphaSector alpha : {AlphaSector::zero, AlphaSector::pi}) {
            WalkParams p{0.2 * pi, -0.15 * pi, 0.2, 40, Boundary::fbc};
            const EdgeModeAnalytic m = analytic_edge_mode(p, alpha, eta);
            for (size_t i = 0; i + 1 < m.amplitudes_odd.size(); ++i) {
                const double lo = std::abs(m.amplitudes_odd[i]);
                const double hi = std::abs(m.amplitudes_odd[i + 1]);
                if (lo < 1e-280 || hi < 1e-280) continue;
                c.max_residual(std::abs(std::log(hi) - std::log(lo) - 2 * m.t_tilde),
                               1e-12);
            }
        }
    return c;
}

Check normalization_half() {
    Check c;
    for (const int eta : {1, -1})
        for (const AlphaSector alpha : {AlphaSector::zero, AlphaSector::pi})
            for (const auto& [t1, t2, g] :
                 {std::tuple{0.2 * pi, -0.15 * pi, 0.0},
                  std::tuple{0.2 * pi, 0.15 * pi, 0.2},
                  std::tuple{-0.3 * pi, 0.55 * pi, -0.1}}) {
                WalkParams p{t1, t2, g, 60, Boundary::fbc};
                const EdgeModeAnalytic m = analytic_edge_mode(p, alpha, eta);
                double sum = 0.0;
                for (double a : m.amplitudes_odd) sum += a * a;
                for (double a : m.amplitudes_even) sum += a * a;
                c.max_residual(std::abs(sum - 0.5), 1e-12);
            }
    return c;
}

Check degenerate_continuity() {
    Check c;
    // Pin T~ = 1e-6 exactly by solving for gamma, then compare the
    // generic geometric profile against the flat limiting form.
    const AlphaSector alpha = AlphaSector::zero;
    const int eta = 1;
    WalkParams p{0.2 * pi, -0.3 * pi, 0.0, 60, Boundary::fbc};
    p.gamma = 1e-6 - inverse_localization(p, alpha, eta).t;
    const EdgeModeAnalytic generic = analytic_edge_mode(p, alpha, eta);

    const LocalizationConstants lc = localization_constants(p.theta1, p.theta2);
    const double z = lc.z0;
    const double flat =
        std::sqrt(1.0 / (p.n_sites * (1.0 + std::pow(z, 2 * eta))));
    const double s = z * lc.r2 > 0 ? 1.0 : -1.0;
    double sign = 1.0;
    for (size_t m = 0; m < generic.amplitudes_odd.size(); ++m) {
        c.max_residual(std::abs(generic.amplitudes_odd[m] - sign * flat), 1e-4);
        sign *= s;
    }
    return c;
}

Check csv_determinism() {
    Check c;
    SweepSpec spec;
    spec.task = Task::spectrum_scan;
    spec.fixed = WalkParams{0.2 * pi, -0.15 * pi, 0.1, 16, Boundary::fbc};
    spec.axis1 = AxisSpec{"theta2", -0.6 * pi, 0.6 * pi, 5};
    spec.threads = 1;
    const std::string once = to_csv(run_sweep(spec));
    spec.threads = 2;
    const std::string twice = to_csv(run_sweep(spec));
    if (once != twice) {
        c.passed = false;
        c.note = "CSV output differs between runs";
    }
    if (once.empty() || once.find("status") == std::string::npos) {
        c.passed = false;
        c.note = "CSV output malformed";
    }
    return c;
}

using SuiteFn = Check (*)();

struct Suite {
    const char* name;
    SuiteFn fn;
};

} // namespace

std::vector<SelfTestResult> run_selftest() {
    const Suite suites[] = {
        {"unitarity-at-gamma-zero", unitarity_at_gamma_zero},
        {"symmetry-residuals", symmetry_residuals},
        {"berry-gauge-invariance", berry_gauge_invariance},
        {"spectrum-pm-symmetry", spectrum_pm_symmetry},
        {"wilson-grid-stability", wilson_grid_stability},
        {"profile-geometric-law", profile_geometric_law},
        {"normalization-half", normalization_half},
        {"degenerate-continuity", degenerate_continuity},
        {"csv-determinism", csv_determinism},
    };
    std::vector<SelfTestResult> results;
    for (const Suite& suite : suites) {
        SelfTestResult r;
        r.name = suite.name;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Check c = suite.fn();
            r.passed = c.passed;
            r.detail = c.note.empty() ? "max residual " + fmt_residual(c.worst)
                                      : c.note;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace qwalk
