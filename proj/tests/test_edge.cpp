// Edge-mode analytics: reflection-constant identities, closed-form decay
// exponents against their defining zeros, gap-closing lines checked by a
// numeric dispersion scan, exact finite-chain eigenvectors, and the
// transfer classification with its loop cross-check.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qwalk/edge_analytics.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/topology.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

// Extremes of the balanced dispersion over momentum; D touching +1 closes
// the E = 0 gap, D touching -1 closes the E = pi gap.
std::pair<double, double> dispersion_range(double t1, double t2) {
    WalkParams p{t1, t2, 0.0, 60, Boundary::pbc};
    double lo = 1e9, hi = -1e9;
    for (int j = 0; j < 4096; ++j) {
        const double d = bloch_dispersion(p, 2.0 * pi * j / 4096, 0.0).real();
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

double mode_center_of_mass(const Vector& psi) {
    double com = 0.0, norm = 0.0;
    for (int n = 0; 2 * n + 1 < psi.size(); ++n) {
        const double w = std::norm(psi[2 * n]) + std::norm(psi[2 * n + 1]);
        com += (n + 1) * w;
        norm += w;
    }
    return com / norm;
}

} // namespace

TEST_CASE("reflection constant: closed forms agree and pair to unity") {
    for (const double th : {0.1, -0.7, 0.2 * pi, 1.4, -1.2}) {
        const double r = coin_reflection(th);
        CHECK(std::abs(r - (1.0 - std::sin(th)) / std::cos(th)) < 1e-13);
        CHECK(std::abs(r - std::tan(pi / 4.0 - th / 2.0)) < 1e-12);
        CHECK(std::abs(r * coin_reflection(-th) - 1.0) < 1e-12);
    }
    CHECK(coin_reflection(0.2 * pi) ==
          doctest::Approx(0.50952544949442879).epsilon(1e-14));
    CHECK(coin_reflection(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(coin_reflection(pi / 2.0), precondition_error);
    CHECK_THROWS_AS(coin_reflection(std::nan("")), invalid_parameter);
}

TEST_CASE("sector constants") {
    const LocalizationConstants lc = localization_constants(0.2 * pi, -0.15 * pi);
    CHECK(lc.z0 == lc.r1);
    CHECK(std::abs(lc.zpi * lc.r1 + 1.0) < 1e-15);
    CHECK(std::abs(lc.z0 * lc.zpi + 1.0) < 1e-15);
}

TEST_CASE("decay exponents vanish exactly where the sectors degenerate") {
    // Z_pi R2 has unit modulus at theta2 = theta1, Z_0 R2 at theta2 = -theta1.
    WalkParams p{0.2 * pi, 0.2 * pi, 0.0, 60, Boundary::fbc};
    for (const int eta : {1, -1})
        CHECK(std::abs(inverse_localization(p, AlphaSector::pi, eta).t) < 1e-12);
    p.theta2 = -0.2 * pi;
    for (const int eta : {1, -1})
        CHECK(std::abs(inverse_localization(p, AlphaSector::zero, eta).t) < 1e-12);
}

TEST_CASE("decay exponents: antisymmetry in eta and the gain/loss shift") {
    const double params[][3] = {
        {0.2 * pi, -0.15 * pi, 0.0}, {0.3 * pi, 0.45 * pi, 0.2},
        {-0.25 * pi, 0.6 * pi, -0.3},
    };
    for (const auto& q : params) {
        WalkParams p{q[0], q[1], q[2], 60, Boundary::fbc};
        for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi}) {
            const InverseLocalization plus = inverse_localization(p, a, 1);
            const InverseLocalization minus = inverse_localization(p, a, -1);
            CHECK(std::abs(plus.t + minus.t) < 1e-13);       // antisymmetric
            CHECK(std::abs(plus.t_tilde - p.gamma - plus.t) < 1e-15);
            CHECK(std::abs(minus.t_tilde - p.gamma - minus.t) < 1e-15);
        }
    }
    WalkParams bad{0.2 * pi, -0.15 * pi, 0.0, 60, Boundary::fbc};
    CHECK_THROWS_AS(inverse_localization(bad, AlphaSector::zero, 0),
                    invalid_parameter);
}

TEST_CASE("gap-closing lines match a numeric dispersion scan") {
    for (const double t1 : {0.2 * pi, 0.0, 0.5 * pi, -0.3 * pi}) {
        const BoundarySet b = phase_boundaries(t1);
        for (const double t2 : b.zero) {
            const auto [lo, hi] = dispersion_range(t1, t2);
            INFO("t1=", t1 / pi, "pi t2=", t2 / pi, "pi");
            CHECK(std::abs(hi - 1.0) < 1e-9); // E = 0 touches
        }
        for (const double t2 : b.pi) {
            const auto [lo, hi] = dispersion_range(t1, t2);
            INFO("t1=", t1 / pi, "pi t2=", t2 / pi, "pi");
            CHECK(std::abs(lo + 1.0) < 1e-9); // E = pi touches
        }
    }
    // And nothing closes away from the listed lines.
    for (const double t2 : {-0.5 * pi, 0.1 * pi, 0.55 * pi}) {
        const auto [lo, hi] = dispersion_range(0.2 * pi, t2);
        CHECK(hi < 1.0 - 1e-3);
        CHECK(lo > -1.0 + 1e-3);
    }
}

TEST_CASE("gap-closing line values") {
    const BoundarySet b = phase_boundaries(0.2 * pi);
    REQUIRE(b.zero.size() == 2);
    REQUIRE(b.pi.size() == 2);
    CHECK(b.zero[0] == doctest::Approx(-0.8 * pi).epsilon(1e-12));
    CHECK(b.zero[1] == doctest::Approx(-0.2 * pi).epsilon(1e-12));
    CHECK(b.pi[0] == doctest::Approx(0.2 * pi).epsilon(1e-12));
    CHECK(b.pi[1] == doctest::Approx(0.8 * pi).epsilon(1e-12));

    // theta1 = 0: both lists collapse onto {0, pi}.
    const BoundarySet b0 = phase_boundaries(0.0);
    REQUIRE(b0.zero.size() == 2);
    CHECK(b0.zero[0] == doctest::Approx(0.0));
    CHECK(b0.zero[1] == doctest::Approx(pi));
    REQUIRE(b0.pi.size() == 2);
    CHECK(b0.pi[0] == doctest::Approx(0.0));
    CHECK(b0.pi[1] == doctest::Approx(pi));

    // theta1 = pi/2: the two root pairs merge; one line per sector.
    const BoundarySet bh = phase_boundaries(0.5 * pi);
    REQUIRE(bh.zero.size() == 1);
    CHECK(bh.zero[0] == doctest::Approx(-0.5 * pi).epsilon(1e-12));
    REQUIRE(bh.pi.size() == 1);
    CHECK(bh.pi[0] == doctest::Approx(0.5 * pi).epsilon(1e-12));
}

TEST_CASE("analytic profile: normalization, geometric law, coin structure") {
    const double settings[][3] = {
        {0.2 * pi, -0.15 * pi, 0.0}, {0.2 * pi, 0.15 * pi, 0.2},
        {0.3 * pi, 0.55 * pi, -0.25},
    };
    for (const auto& q : settings)
        for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
            for (const int eta : {1, -1}) {
                WalkParams p{q[0], q[1], q[2], 60, Boundary::fbc};
                const EdgeModeAnalytic mode = analytic_edge_mode(p, a, eta);
                REQUIRE(static_cast<int>(mode.amplitudes_odd.size()) == 30);
                REQUIRE(static_cast<int>(mode.amplitudes_even.size()) == 30);

                double sum = 0.0;
                for (int m = 0; m < 30; ++m)
                    sum += mode.amplitudes_odd[m] * mode.amplitudes_odd[m] +
                           mode.amplitudes_even[m] * mode.amplitudes_even[m];
                CHECK(std::abs(sum - 0.5) < 1e-12);

                // Geometric two-cell law, exact in log space.
                for (int m = 0; m + 1 < 30; ++m) {
                    const double a0 = std::abs(mode.amplitudes_odd[m]);
                    const double a1 = std::abs(mode.amplitudes_odd[m + 1]);
                    if (a0 < 1e-280 || a1 < 1e-280) continue;
                    CHECK(std::abs(std::log(a1) - std::log(a0) -
                                   2.0 * mode.t_tilde) < 1e-12);
                }

                CHECK(mode.coin_state[0] == 1.0);
                CHECK(mode.coin_state[1] == static_cast<double>(eta));

                const Vector psi = mode.materialize();
                CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
                // coin channels locked to |H> + eta |V> on every site
                for (int i = 0; i < psi.size(); i += 2)
                    CHECK(std::abs(psi[i + 1] - double(eta) * psi[i]) < 1e-15);
            }
}

TEST_CASE("analytic modes are exact eigenvectors of the finite chain") {
    const double settings[][3] = {
        {0.2 * pi, -0.15 * pi, 0.0}, {0.2 * pi, 0.15 * pi, 0.2},
    };
    for (const auto& q : settings) {
        WalkParams p{q[0], q[1], q[2], 60, Boundary::fbc};
        const Matrix u = build_floquet(p);
        for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
            for (const int eta : {1, -1}) {
                const Vector psi = analytic_edge_mode(p, a, eta).materialize();
                const double lam = a == AlphaSector::zero ? 1.0 : -1.0;
                CHECK((u * psi - lam * psi).norm() < 1e-12);
            }
    }
}

TEST_CASE("fidelity report against the dense spectrum") {
    WalkParams p{0.2 * pi, -0.15 * pi, 0.0, 60, Boundary::fbc};
    const QuasienergySpectrum s = spectrum_fbc(p);
    for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
        for (const int eta : {1, -1}) {
            const FidelityReport rep = verify_against_numeric(p, a, eta, s);
            CHECK(rep.fidelity > 1.0 - 1e-6);
            CHECK(rep.eigen_residual < 1e-8);
            CHECK(rep.sublattice_residual < 1e-12);
            CHECK(rep.eigenvalue ==
                  (a == AlphaSector::zero ? complexd(1.0) : complexd(-1.0)));
        }

    WalkParams lossy{0.2 * pi, 0.15 * pi, 0.2, 60, Boundary::fbc};
    const QuasienergySpectrum sl = spectrum_fbc(lossy);
    for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
        for (const int eta : {1, -1}) {
            const FidelityReport rep = verify_against_numeric(lossy, a, eta, sl);
            CHECK(rep.fidelity > 1.0 - 1e-5);
            CHECK(rep.eigen_residual < 1e-8);
        }
}

TEST_CASE("fidelity preconditions") {
    WalkParams p{0.2 * pi, -0.15 * pi, 0.0, 60, Boundary::fbc};
    const QuasienergySpectrum s = spectrum_fbc(p);

    WalkParams other = p;
    other.theta2 = 0.1 * pi;
    CHECK_THROWS_AS(verify_against_numeric(other, AlphaSector::zero, 1, s),
                    invalid_parameter);

    WalkParams ring = p;
    ring.boundary = Boundary::pbc;
    CHECK_THROWS_AS(verify_against_numeric(ring, AlphaSector::zero, 1, s),
                    invalid_parameter);

    // A momentum-sampled spectrum has no real-space modes to project on.
    const QuasienergySpectrum bloch = spectrum_pbc_bloch(p, 64);
    CHECK_THROWS_AS(verify_against_numeric(p, AlphaSector::zero, 1, bloch),
                    invalid_parameter);

    // Gapless parameters: the boundary pair is not spectrally isolated.
    WalkParams gapless{0.2 * pi, -0.2 * pi, 0.0, 24, Boundary::fbc};
    const QuasienergySpectrum sg = spectrum_fbc(gapless);
    CHECK_THROWS_AS(verify_against_numeric(gapless, AlphaSector::zero, 1, sg),
                    precondition_error);
}

TEST_CASE("decay-exponent sign picks the localization edge") {
    WalkParams p{0.2 * pi, 0.15 * pi, 0.2, 60, Boundary::fbc};
    for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
        for (const int eta : {1, -1}) {
            const EdgeModeAnalytic mode = analytic_edge_mode(p, a, eta);
            const double com = mode_center_of_mass(mode.materialize());
            INFO("t_tilde=", mode.t_tilde, " com=", com);
            if (mode.t_tilde > 0.0)
                CHECK(com > p.n_sites / 2.0);
            else
                CHECK(com < p.n_sites / 2.0);
        }
}

TEST_CASE("transfer classification at the four sign classes") {
    struct Case {
        double t1, t2;
        int s_zero, s_pi;
        TransferRegion region;
    };
    const Case cases[] = {
        {-0.4 * pi, -0.2 * pi, -1, -1, TransferRegion::opposite_edges},
        {-0.2 * pi, 0.1 * pi, 1, -1, TransferRegion::zero_transferred},
        {0.2 * pi, 0.15 * pi, -1, 1, TransferRegion::pi_transferred},
        {0.04 * pi, 0.08 * pi, 1, 1, TransferRegion::both_transferred},
    };
    for (const Case& c : cases) {
        WalkParams p{c.t1, c.t2, 0.2, 60, Boundary::fbc};
        const TransferClass tc = transfer_classification_with_loop(p, 512);
        CHECK(tc.s_zero == c.s_zero);
        CHECK(tc.s_pi == c.s_pi);
        CHECK(tc.region == c.region);
        REQUIRE(tc.loop_agreement.has_value());
        CHECK(*tc.loop_agreement);
        REQUIRE(tc.loops.has_value());
        CHECK(tc.loops->inside_zero == (c.s_zero > 0));
        CHECK(tc.loops->inside_pi == (c.s_pi > 0));
    }
}

TEST_CASE("balanced walk never transfers") {
    // At gamma = 0 the eta partners have opposite decay exponents, so both
    // sector products are negative wherever they are defined.
    for (const double t2 : {-0.6 * pi, -0.35 * pi, 0.1 * pi, 0.45 * pi, 0.9 * pi}) {
        WalkParams p{0.2 * pi, t2, 0.0, 60, Boundary::fbc};
        const TransferClass tc = transfer_classification(p);
        CHECK(tc.s_zero == -1);
        CHECK(tc.s_pi == -1);
        CHECK(tc.region == TransferRegion::opposite_edges);
    }
}

TEST_CASE("classification rejects transition points") {
    // theta2 = theta1 pins T_pi = 0, so T~_pi = gamma + 0 vanishes at
    // gamma = 0 exactly.
    WalkParams p{0.2 * pi, 0.2 * pi, 0.0, 60, Boundary::fbc};
    CHECK_THROWS_AS(transfer_classification(p), precondition_error);
}

TEST_CASE("transfer boundary roots") {
    const std::vector<double> zero = transfer_boundaries(0.2, 0.2 * pi, AlphaSector::zero);
    const std::vector<double> want_zero = {-0.9138 * pi, -0.7095 * pi,
                                           -0.2905 * pi, -0.0862 * pi};
    REQUIRE(zero.size() == want_zero.size());
    for (size_t i = 0; i < zero.size(); ++i)
        CHECK(std::abs(zero[i] - want_zero[i]) < 1e-4 * pi);

    const std::vector<double> pi_roots = transfer_boundaries(0.2, 0.2 * pi, AlphaSector::pi);
    const std::vector<double> want_pi = {0.0862 * pi, 0.2905 * pi, 0.7095 * pi,
                                         0.9138 * pi};
    REQUIRE(pi_roots.size() == want_pi.size());
    for (size_t i = 0; i < pi_roots.size(); ++i)
        CHECK(std::abs(pi_roots[i] - want_pi[i]) < 1e-4 * pi);

    // Mirror relation between the sectors: pi-sector roots are the
    // reflected zero-sector roots.
    for (size_t i = 0; i < zero.size(); ++i)
        CHECK(std::abs(pi_roots[i] + zero[zero.size() - 1 - i]) < 1e-12);
}

TEST_CASE("transfer boundary roots null the exponent they claim to") {
    for (const AlphaSector a : {AlphaSector::zero, AlphaSector::pi})
        for (const double root : transfer_boundaries(0.2, 0.2 * pi, a)) {
            WalkParams p{0.2 * pi, root, 0.2, 60, Boundary::fbc};
            double best = 1e9;
            int best_eta = 0;
            for (const int eta : {1, -1}) {
                const double tt = inverse_localization(p, a, eta).t_tilde;
                if (std::abs(tt) < best) {
                    best = std::abs(tt);
                    best_eta = eta;
                }
            }
            CHECK(best < 1e-10);
            // and the exponent changes sign across the root
            WalkParams lo = p, hi = p;
            lo.theta2 = root - 1e-5;
            hi.theta2 = root + 1e-5;
            CHECK(inverse_localization(lo, a, best_eta).t_tilde *
                      inverse_localization(hi, a, best_eta).t_tilde <
                  0.0);
        }
}

TEST_CASE("transfer boundaries collapse onto gap closings when balanced") {
    for (const double t1 : {0.2 * pi, -0.3 * pi}) {
        const BoundarySet gap = phase_boundaries(t1);
        const std::vector<double> zero = transfer_boundaries(0.0, t1, AlphaSector::zero);
        REQUIRE(zero.size() == gap.zero.size());
        for (size_t i = 0; i < zero.size(); ++i)
            CHECK(std::abs(zero[i] - gap.zero[i]) < 1e-10);
        const std::vector<double> pr = transfer_boundaries(0.0, t1, AlphaSector::pi);
        REQUIRE(pr.size() == gap.pi.size());
        for (size_t i = 0; i < pr.size(); ++i)
            CHECK(std::abs(pr[i] - gap.pi[i]) < 1e-10);
    }
}

TEST_CASE("sign criterion and loop criterion agree across the map") {
    // Moderate grid over the coin torus; points on poles, gap closings or
    // transfer boundaries are skipped by their preconditions.
    int checked = 0;
    for (int i = 0; i < 21; ++i)
        for (int j = 0; j < 21; ++j) {
            WalkParams p{-pi + 2.0 * pi * i / 20, -pi + 2.0 * pi * j / 20, 0.2,
                         60, Boundary::fbc};
            try {
                const TransferClass tc = transfer_classification_with_loop(p, 256);
                REQUIRE(tc.loop_agreement.has_value());
                INFO("theta1=", p.theta1 / pi, "pi theta2=", p.theta2 / pi, "pi");
                CHECK(*tc.loop_agreement);
                ++checked;
            } catch (const precondition_error&) {
            } catch (const resolution_error&) {
            }
        }
    CHECK(checked > 300);
}
