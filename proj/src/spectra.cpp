#include "qwalk/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qwalk/detail/block_eigen.hpp"

namespace qwalk {

namespace {

constexpr double pi = std::numbers::pi;

using detail::BlockEigen;

} // namespace

double distance_to_zero(complexd energy) { return std::abs(energy); }

double distance_to_pi(complexd energy) {
    return std::min(std::abs(energy - pi), std::abs(energy + pi));
}

QuasienergySpectrum spectrum_fbc(const WalkParams& params) {
    params.validate();
    if (params.boundary != Boundary::fbc)
        throw precondition_error("spectrum_fbc requires flip boundaries");

    const int N = params.n_sites;
    const Matrix U = build_floquet(params, Frame::standard);

    // Exact diagonal site gauge: the flip-boundary walk couples sites at
    // distance <= 2, so conjugating by diag(e^{-gamma(n-1)}) per site keeps
    // every entry bounded while removing the bulk non-normality.
    Matrix T(2 * N, 2 * N);
    for (int i = 0; i < 2 * N; ++i)
        for (int j = 0; j < 2 * N; ++j) {
            const int ni = i / 2, nj = j / 2;
            T(i, j) = U(i, j) * std::exp(-params.gamma * (ni - nj));
        }

    EigenSystem sys = eig_general(T);

    QuasienergySpectrum spec;
    spec.params = params;
    spec.source = SpectrumSource::full_matrix;
    spec.energies.resize(2 * N);
    spec.modes.resize(2 * N, 2 * N);
    for (int j = 0; j < 2 * N; ++j) {
        spec.energies[j] = quasienergy_from_eigenvalue(sys.values[j]);
        Vector v = sys.right_vectors.col(j);
        for (int i = 0; i < 2 * N; ++i)
            v[i] *= std::exp(params.gamma * (i / 2)); // undo the gauge
        spec.modes.col(j) = v / v.norm();
    }
    return spec;
}

QuasienergySpectrum spectrum_pbc_bloch(const WalkParams& params, int n_k) {
    params.validate();
    if (n_k < 64)
        throw precondition_error("spectrum_pbc_bloch requires n_k >= 64");

    QuasienergySpectrum spec;
    spec.params = params;
    spec.source = SpectrumSource::bloch_sampled;
    spec.momenta.resize(n_k);
    spec.energies.resize(2 * n_k);
    spec.modes.resize(2, 2 * n_k);

    complexd rho_prev;
    Eigen::Vector2cd prev[2];
    for (int j = 0; j < n_k; ++j) {
        const double p = 2.0 * pi * j / n_k;
        spec.momenta[j] = p;
        const BlochBlock block = build_bloch_block(params, p, 0.0);
        BlockEigen be = detail::block_eigen(block.entries, j ? &rho_prev : nullptr);
        rho_prev = be.rho;

        int map[2] = {0, 1}; // band b of this point stored at slot map[b]
        if (j > 0) {
            // keep each stored band continuous by maximal eigenvector overlap
            double keep = 0.0, swap = 0.0;
            for (int b = 0; b < 2; ++b) {
                const Eigen::Vector2cd cur = be.right(b).normalized();
                keep += std::abs(prev[b].dot(cur));
                swap += std::abs(prev[1 - b].dot(cur));
            }
            if (swap > keep) { map[0] = 1; map[1] = 0; }
        }
        for (int b = 0; b < 2; ++b) {
            const int slot = map[b];
            spec.energies[2 * j + slot] = quasienergy_from_eigenvalue(be.lambda(b));
            spec.modes.col(2 * j + slot) = be.right(b).normalized();
            prev[slot] = spec.modes.col(2 * j + slot);
        }
    }
    return spec;
}

LoopClassification loop_classification(const WalkParams& params, int n_k) {
    params.validate();
    if (params.boundary != Boundary::pbc)
        throw precondition_error("loop_classification requires periodic boundaries");
    if (n_k < 64)
        throw precondition_error("loop_classification requires n_k >= 64");

    // Sample the two tracked eigenvalue strands lambda_band(p).
    std::vector<complexd> strand0(n_k), strand1(n_k);
    complexd rho_prev;
    for (int j = 0; j < n_k; ++j) {
        const double p = 2.0 * pi * j / n_k;
        const BlochBlock block = build_bloch_block(params, p, 0.0);
        const BlockEigen be =
            detail::block_eigen(block.entries, j ? &rho_prev : nullptr);
        rho_prev = be.rho;
        strand0[j] = be.lambda(0);
        strand1[j] = be.lambda(1);
    }

    // Winding of the union curve about lambda0 = e^{-iE0}: accumulate the
    // per-step argument increment on each strand and sum.  The strands may
    // exchange over one period; their union is always a closed curve.
    auto winding_about = [&](complexd target, const char* name) {
        double acc = 0.0;
        for (const auto* strand : {&strand0, &strand1}) {
            for (int j = 0; j < n_k; ++j) {
                const complexd a = (*strand)[j] - target;
                const complexd b = (*strand)[(j + 1) % n_k] - target;
                if (std::abs(a) < 1e-6 || std::abs(b) < 1e-6)
                    throw precondition_error(
                        std::string("loop winding target ") + name +
                        " lies on the spectral curve");
                acc += std::arg(b / a);
            }
        }
        const double w = acc / (2.0 * pi);
        const double rounded = std::round(w);
        if (std::abs(w - rounded) >= 0.05)
            throw resolution_error(
                std::string("loop winding about ") + name +
                " did not accumulate to an integer; refine the momentum grid");
        return static_cast<int>(rounded);
    };

    // Strand exchange across the period boundary: if the tracked strands
    // swap, splice them into one closed curve by concatenation; the summed
    // per-strand accumulation already realizes exactly that splice.
    LoopClassification cls;
    cls.winding_about_zero = winding_about(complexd(1.0, 0.0), "E=0");
    cls.winding_about_pi = winding_about(complexd(-1.0, 0.0), "E=pi");
    cls.inside_zero = cls.winding_about_zero != 0;
    cls.inside_pi = cls.winding_about_pi != 0;
    return cls;
}

SkinReport skin_report(const QuasienergySpectrum& spectrum, double bulk_filter) {
    if (spectrum.source != SpectrumSource::full_matrix ||
        spectrum.params.boundary != Boundary::fbc)
        throw precondition_error("skin_report requires a full-matrix FBC spectrum");
    if (spectrum.modes.cols() != static_cast<Eigen::Index>(spectrum.energies.size()))
        throw precondition_error("skin_report requires the spectrum to carry modes");

    const int N = spectrum.params.n_sites;
    const int m = static_cast<int>(spectrum.energies.size());
    SkinReport rep;
    rep.mean_positions.resize(m);
    rep.ipr.resize(m);
    int bulk = 0, right = 0;
    for (int j = 0; j < m; ++j) {
        double com = 0.0, ipr = 0.0, norm = 0.0;
        for (int n = 0; n < N; ++n) {
            const double w = std::norm(spectrum.modes(2 * n, j)) +
                             std::norm(spectrum.modes(2 * n + 1, j));
            norm += w;
            com += (n + 1) * w;
            ipr += w * w;
        }
        com /= norm;
        rep.mean_positions[j] = com;
        rep.ipr[j] = ipr / (norm * norm);
        const double d = std::min(distance_to_zero(spectrum.energies[j]),
                                  distance_to_pi(spectrum.energies[j]));
        if (d > bulk_filter) {
            ++bulk;
            if (com > N / 2.0) ++right;
        }
    }
    if (bulk == 0)
        throw precondition_error("skin_report: no bulk modes survive the filter");
    rep.fraction_right = static_cast<double>(right) / bulk;
    return rep;
}

} // namespace qwalk
