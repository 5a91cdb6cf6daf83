#include "qwalk/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qwalk/detail/block_eigen.hpp"

namespace qwalk {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Fix the ray representative of a vector: rotate so the largest-modulus
// component is real positive (ties broken toward index 0).  A pure
// function of the ray, so injected phase gauges are erased exactly.
Eigen::Vector2cd canonicalize(const Eigen::Vector2cd& v) {
    const int m = std::abs(v[0]) >= std::abs(v[1]) ? 0 : 1;
    const double r = std::abs(v[m]);
    if (r == 0.0)
        throw consistency_error("eigenvector lift vanished on the contour");
    return v * (std::conj(v[m]) / r);
}

// Bilinear pairing of a left covector with a right vector (no conjugate).
complexd pair(const Eigen::Vector2cd& l, const Eigen::Vector2cd& r) {
    return l[0] * r[0] + l[1] * r[1];
}

struct WilsonPhases {
    double phase[2];
    double min_gap;
};

// Discrete biorthogonal Wilson phases of both bands on an n-point closed
// contour.  The branch of rho is tracked by continuity; if it returns to
// the opposite sheet after a full period (band exchange), the final step
// of each accumulator crosses into the other band, which splices the two
// strands into the single closed curve they form in that case.
WilsonPhases wilson_phases(const WalkParams& params, Frame frame,
                           Contour contour, int n, const GaugeInjector& gauge) {
    const double deformation = contour == Contour::gbz ? params.gamma : 0.0;

    std::vector<detail::BlockEigen> be(n);
    complexd rho_prev;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double p = two_pi * j / n;
        const BlochBlock block = build_bloch_block(params, p, deformation, frame);
        be[j] = detail::block_eigen(block.entries, j ? &rho_prev : nullptr);
        rho_prev = be[j].rho;
        min_gap = std::min(min_gap, 2.0 * std::abs(be[j].rho));
    }
    if (min_gap <= 1e-6)
        throw precondition_error(
            "band gap collapses along the contour; winding is undefined");

    // Continue the rho branch across the period boundary to detect a
    // band exchange at the wrap.
    const BlochBlock wrap_block = build_bloch_block(params, 0.0, deformation, frame);
    const detail::BlockEigen wrap = detail::block_eigen(wrap_block.entries, &rho_prev);
    const bool swapped = std::abs(wrap.rho - be[0].rho) > std::abs(wrap.rho + be[0].rho);

    auto sampled_right = [&](int j, int band) {
        Eigen::Vector2cd v = be[j].right(band);
        if (gauge) v *= gauge(j, band);
        return canonicalize(v);
    };

    WilsonPhases out{};
    out.min_gap = min_gap;
    for (int band = 0; band < 2; ++band) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const Eigen::Vector2cd l = be[j].left(band);
            const Eigen::Vector2cd rj = sampled_right(j, band);
            const int jn = (j + 1) % n;
            const int band_n = (jn == 0 && swapped) ? 1 - band : band;
            const Eigen::Vector2cd rn = sampled_right(jn, band_n);
            const complexd ratio = pair(l, rn) / pair(l, rj);
            acc += std::arg(ratio);
        }
        out.phase[band] = acc;
    }
    return out;
}

} // namespace

BerryPhaseResult berry_phase(const WalkParams& params, Frame frame,
                             Contour contour, int n_k,
                             const GaugeInjector& gauge) {
    params.validate();
    if (n_k < 8)
        throw invalid_parameter("berry_phase requires n_k >= 8");

    int n = n_k;
    WilsonPhases cur = wilson_phases(params, frame, contour, n, gauge);
    while (true) {
        if (2 * n > 8192)
            throw resolution_error(
                "Berry phase did not settle below the 8192-point grid cap");
        const WilsonPhases next =
            wilson_phases(params, frame, contour, 2 * n, gauge);
        const double total_cur = cur.phase[0] + cur.phase[1];
        const double total_next = next.phase[0] + next.phase[1];
        n *= 2;
        cur = next;
        if (std::abs(total_next - total_cur) < 0.01 * two_pi) break;
    }

    BerryPhaseResult res;
    res.phase_plus = cur.phase[0];
    res.phase_minus = cur.phase[1];
    res.total = cur.phase[0] + cur.phase[1];
    res.n_k = n;
    return res;
}

namespace {

double round_half_integer(double v, const char* what) {
    const double rounded = std::round(2.0 * v) / 2.0;
    if (std::abs(v - rounded) > 0.05)
        throw resolution_error(std::string(what) +
                               " winding is not quantized to half-integers; "
                               "refine the grid or move off a phase boundary");
    return rounded;
}

} // namespace

InvariantPair invariants(const WalkParams& params, Contour contour, int n_k) {
    const BerryPhaseResult standard =
        berry_phase(params, Frame::standard, contour, n_k);
    const BerryPhaseResult shifted =
        berry_phase(params, Frame::shifted, contour, n_k);

    InvariantPair inv;
    inv.contour = contour;
    inv.nu_raw = standard.total / two_pi;
    inv.nu_prime_raw = shifted.total / two_pi;
    inv.nu = round_half_integer(inv.nu_raw, "standard-frame");
    inv.nu_prime = round_half_integer(inv.nu_prime_raw, "shifted-frame");
    inv.nu0 = (inv.nu + inv.nu_prime) / 2.0;
    inv.nupi = (inv.nu - inv.nu_prime) / 2.0;
    return inv;
}

std::vector<complexd> gbz_contour(double gamma, int n_k) {
    if (!std::isfinite(gamma))
        throw invalid_parameter("gbz_contour: gamma must be finite");
    if (n_k < 1)
        throw invalid_parameter("gbz_contour: n_k must be positive");
    std::vector<complexd> beta(n_k);
    for (int j = 0; j < n_k; ++j)
        beta[j] = std::exp(complexd(gamma, two_pi * j / n_k));
    return beta;
}

} // namespace qwalk
