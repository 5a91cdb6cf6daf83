#include "qwalk/edge_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qwalk {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

void require_eta(int eta) {
    if (eta != 1 && eta != -1)
        throw invalid_parameter("eta must be +1 or -1");
}

double fold_angle(double x) {
    double f = std::remainder(x, two_pi);
    if (f <= -pi) f += two_pi;
    return f;
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            v.end());
    return v;
}

// ln(1 + Z^{2 eta}) without overflow for extreme Z.
double log1p_z2eta(double z, int eta) {
    const double l = 2.0 * eta * std::log(std::abs(z));
    return std::max(l, 0.0) + std::log1p(std::exp(-std::abs(l)));
}

} // namespace

double coin_reflection(double theta) {
    if (!std::isfinite(theta))
        throw invalid_parameter("coin_reflection: angle must be finite");
    const double c = std::cos(theta);
    if (std::abs(c) <= 1e-12)
        throw precondition_error(
            "coin_reflection: angle at a pole of sec/tan (cos theta ~ 0)");
    return (1.0 - std::sin(theta)) / c;
}

LocalizationConstants localization_constants(double theta1, double theta2) {
    LocalizationConstants lc;
    lc.r1 = coin_reflection(theta1);
    lc.r2 = coin_reflection(theta2);
    lc.z0 = lc.r1;
    lc.zpi = -1.0 / lc.r1;
    return lc;
}

InverseLocalization inverse_localization(const WalkParams& params,
                                         AlphaSector alpha, int eta) {
    params.validate();
    require_eta(eta);
    const LocalizationConstants lc =
        localization_constants(params.theta1, params.theta2);
    const double z = alpha == AlphaSector::zero ? lc.z0 : lc.zpi;
    InverseLocalization out;
    out.t = 0.5 * eta * std::log(std::abs(z * lc.r2));
    out.t_tilde = params.gamma + out.t;
    return out;
}

BoundarySet phase_boundaries(double theta1) {
    if (!std::isfinite(theta1))
        throw invalid_parameter("phase_boundaries: angle must be finite");
    BoundarySet b;
    b.zero = sorted_unique({fold_angle(-theta1), fold_angle(pi + theta1)});
    b.pi = sorted_unique({fold_angle(theta1), fold_angle(pi - theta1)});
    return b;
}

EdgeModeAnalytic analytic_edge_mode(const WalkParams& params,
                                    AlphaSector alpha, int eta) {
    params.validate();
    require_eta(eta);

    const LocalizationConstants lc =
        localization_constants(params.theta1, params.theta2);
    const double z = alpha == AlphaSector::zero ? lc.z0 : lc.zpi;
    const double zr = z * lc.r2;
    if (zr == 0.0)
        throw invalid_parameter("analytic_edge_mode: Z R2 vanished");
    const double s = zr > 0.0 ? 1.0 : -1.0;

    const int n = params.n_sites;
    const int cells = n / 2;
    const double tt = params.gamma + 0.5 * eta * std::log(std::abs(zr));
    const double zpow = eta == 1 ? z : 1.0 / z;
    const double ln_norm = log1p_z2eta(z, eta);

    EdgeModeAnalytic mode;
    mode.alpha = alpha;
    mode.eta = eta;
    mode.t_tilde = tt;
    mode.coin_state[0] = 1.0;
    mode.coin_state[1] = static_cast<double>(eta);
    mode.n_sites = n;
    mode.amplitudes_odd.resize(cells);
    mode.amplitudes_even.resize(cells);

    if (std::abs(tt) < 1e-12) {
        // Flat profile: the geometric ratio degenerates to a pure sign.
        const double ln_a = -0.5 * (std::log(static_cast<double>(n)) + ln_norm);
        const double a = std::exp(ln_a);
        double sign = 1.0;
        for (int m = 0; m < cells; ++m) {
            mode.amplitudes_odd[m] = sign * a;
            sign *= s;
        }
    } else {
        // ln of (1 - e^{4T~}) / (1 - e^{2NT~}), evaluated in whichever
        // form keeps every exponential below 1.
        double ln_num;
        if (tt > 0.0) {
            ln_num = (4.0 - 2.0 * n) * tt + std::log(-std::expm1(-4.0 * tt)) -
                     std::log(-std::expm1(-2.0 * n * tt));
        } else {
            ln_num = std::log(-std::expm1(4.0 * tt)) -
                     std::log(-std::expm1(2.0 * n * tt));
        }
        const double ln_a1 = 0.5 * (ln_num - std::numbers::ln2 - ln_norm);
        double sign = 1.0;
        for (int m = 0; m < cells; ++m) {
            mode.amplitudes_odd[m] = sign * std::exp(ln_a1 + 2.0 * tt * m);
            sign *= s;
        }
    }
    for (int m = 0; m < cells; ++m)
        mode.amplitudes_even[m] = eta * zpow * mode.amplitudes_odd[m];
    return mode;
}

Vector EdgeModeAnalytic::materialize() const {
    Vector psi = Vector::Zero(2 * n_sites);
    const int cells = n_sites / 2;
    for (int m = 0; m < cells; ++m) {
        const int odd_site = 2 * m;      // site 2m+1, zero-based 2m
        const int even_site = 2 * m + 1; // site 2m+2, zero-based 2m+1
        psi[2 * odd_site] = amplitudes_odd[m];
        psi[2 * odd_site + 1] = eta * amplitudes_odd[m];
        psi[2 * even_site] = amplitudes_even[m];
        psi[2 * even_site + 1] = eta * amplitudes_even[m];
    }
    return psi;
}

FidelityReport verify_against_numeric(const WalkParams& params,
                                      AlphaSector alpha, int eta,
                                      const QuasienergySpectrum& spectrum) {
    params.validate();
    require_eta(eta);
    if (params.boundary != Boundary::fbc)
        throw invalid_parameter(
            "verify_against_numeric: boundary modes require flip boundaries");
    const WalkParams& sp = spectrum.params;
    if (sp.theta1 != params.theta1 || sp.theta2 != params.theta2 ||
        sp.gamma != params.gamma || sp.n_sites != params.n_sites ||
        sp.boundary != params.boundary)
        throw invalid_parameter(
            "verify_against_numeric: spectrum was computed for different parameters");
    if (spectrum.source != SpectrumSource::full_matrix ||
        spectrum.modes.rows() != 2 * params.n_sites)
        throw invalid_parameter(
            "verify_against_numeric: need a full-matrix spectrum with eigenvectors");

    // Margin check: the deformed-contour bulk gap must be comfortably
    // open or the boundary pair is not spectrally isolated.
    {
        double min_gap = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 512; ++j) {
            const double p = two_pi * j / 512;
            const BlochBlock block =
                build_bloch_block(params, p, params.gamma, Frame::standard);
            const complexd tr = block.entries(0, 0) + block.entries(1, 1);
            const complexd rho2 = 1.0 - 0.25 * tr * tr; // D^2 + rho^2 = 1
            min_gap = std::min(min_gap, 2.0 * std::sqrt(std::abs(rho2)));
        }
        if (min_gap <= 1e-3)
            throw precondition_error(
                "verify_against_numeric: bulk gap margin too small to isolate "
                "the boundary pair");
    }

    const complexd lambda_t = alpha == AlphaSector::zero ? 1.0 : -1.0;
    auto dist = [&](complexd e) {
        return alpha == AlphaSector::zero ? distance_to_zero(e)
                                          : distance_to_pi(e);
    };
    std::vector<int> picked;
    for (int i = 0; i < static_cast<int>(spectrum.energies.size()); ++i)
        if (dist(spectrum.energies[i]) < 1e-6) picked.push_back(i);
    if (picked.size() != 2)
        throw precondition_error(
            "verify_against_numeric: degenerate boundary pair not found in the "
            "spectrum (expected exactly two eigenvalues at the sector center)");

    const int dim = 2 * params.n_sites;
    Matrix pair(dim, 2);
    pair.col(0) = spectrum.modes.col(picked[0]);
    pair.col(1) = spectrum.modes.col(picked[1]);
    Eigen::HouseholderQR<Matrix> qr(pair);
    const Matrix q = qr.householderQ() * Matrix::Identity(dim, 2);

    Vector psi = analytic_edge_mode(params, alpha, eta).materialize();
    psi /= psi.norm();

    FidelityReport report;
    report.eigenvalue = lambda_t;
    report.fidelity = (q.adjoint() * psi).squaredNorm();

    const Matrix u = build_floquet(params);
    report.eigen_residual = (u * psi - lambda_t * psi).norm();

    Vector gpsi(dim);
    for (int i = 0; i < dim; i += 2) {
        gpsi[i] = psi[i + 1];
        gpsi[i + 1] = psi[i];
    }
    report.sublattice_residual = (gpsi - static_cast<double>(eta) * psi).norm();
    return report;
}

namespace {

TransferRegion region_from_signs(int s_zero, int s_pi) {
    if (s_zero < 0) return s_pi < 0 ? TransferRegion::opposite_edges
                                    : TransferRegion::pi_transferred;
    return s_pi < 0 ? TransferRegion::zero_transferred
                    : TransferRegion::both_transferred;
}

} // namespace

TransferClass transfer_classification(const WalkParams& params) {
    params.validate();
    double tt[2][2]; // [sector][eta index]
    const AlphaSector sectors[2] = {AlphaSector::zero, AlphaSector::pi};
    for (int a = 0; a < 2; ++a)
        for (int e = 0; e < 2; ++e) {
            tt[a][e] = inverse_localization(params, sectors[a], e ? -1 : 1).t_tilde;
            if (std::abs(tt[a][e]) < 1e-12)
                throw precondition_error(
                    "transfer_classification: parameters sit on a transfer "
                    "boundary (an inverse localization length vanishes)");
        }
    TransferClass tc;
    tc.s_zero = tt[0][0] * tt[0][1] > 0.0 ? 1 : -1;
    tc.s_pi = tt[1][0] * tt[1][1] > 0.0 ? 1 : -1;
    tc.region = region_from_signs(tc.s_zero, tc.s_pi);
    return tc;
}

TransferClass transfer_classification_with_loop(const WalkParams& params,
                                                int n_k) {
    TransferClass tc = transfer_classification(params);
    WalkParams pbc = params;
    pbc.boundary = Boundary::pbc;
    const LoopClassification loops = loop_classification(pbc, n_k);
    tc.loops = loops;
    tc.loop_agreement = (loops.inside_zero == (tc.s_zero > 0)) &&
                        (loops.inside_pi == (tc.s_pi > 0));
    return tc;
}

std::vector<double> transfer_boundaries(double gamma, double theta1,
                                        AlphaSector alpha) {
    if (!std::isfinite(gamma))
        throw invalid_parameter("transfer_boundaries: gamma must be finite");
    const double r1 = coin_reflection(theta1);
    const double z = alpha == AlphaSector::zero ? std::abs(r1) : 1.0 / std::abs(r1);

    // T~ = 0 means |Z R2| = e^{-2 gamma eta}; invert R2 = tan(pi/4 - t2/2)
    // for both eta and both signs of R2.
    std::vector<double> roots;
    for (const int eta : {1, -1}) {
        const double t = std::exp(-2.0 * gamma * eta) / z;
        for (const double r2 : {t, -t}) {
            double theta2 = pi / 2.0 - 2.0 * std::atan(r2);
            if (theta2 > pi) theta2 -= two_pi;
            roots.push_back(theta2);
        }
    }
    return sorted_unique(roots);
}

} // namespace qwalk
