// Operator construction tests: explicit small-lattice oracles for the
// factor matrices, closed-form momentum-block checks at the trivial coin,
// and the ring-spectrum consistency between the 2x2 momentum blocks and
// the full real-space operator.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qwalk/eigensystem.hpp"
#include "qwalk/walk.hpp"

using namespace qwalk;
using std::numbers::pi;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

bool is_permutation(const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        int row_ones = 0, col_ones = 0;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double r = std::abs(m(i, j));
            const double c = std::abs(m(j, i));
            if (r > 1e-15) {
                if (std::abs(r - 1.0) > 1e-15) return false;
                ++row_ones;
            }
            if (c > 1e-15) ++col_ones;
        }
        if (row_ones != 1 || col_ones != 1) return false;
    }
    return true;
}

std::vector<complexd> sorted_values(std::vector<complexd> v) {
    std::sort(v.begin(), v.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

double multiset_distance(std::vector<complexd> a, std::vector<complexd> b) {
    REQUIRE(a.size() == b.size());
    a = sorted_values(std::move(a));
    b = sorted_values(std::move(b));
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST_CASE("coin applies one rotation block per site") {
    const double th = 0.37;
    const Matrix m = build_coin(th, 3);
    REQUIRE(m.rows() == 6);
    const double c = std::cos(th), s = std::sin(th);
    for (int n = 0; n < 3; ++n) {
        CHECK(std::abs(m(2 * n, 2 * n) - c) < 1e-15);
        CHECK(std::abs(m(2 * n, 2 * n + 1) + s) < 1e-15);
        CHECK(std::abs(m(2 * n + 1, 2 * n) - s) < 1e-15);
        CHECK(std::abs(m(2 * n + 1, 2 * n + 1) - c) < 1e-15);
    }
    double off_block = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (i / 2 != j / 2) off_block = std::max(off_block, std::abs(m(i, j)));
    CHECK(off_block == 0.0);
}

TEST_CASE("shift on the two-site ring is the expected permutation") {
    const Matrix s = build_shift(2, Boundary::pbc);
    Matrix want = Matrix::Zero(4, 4);
    // H hops right (with wrap), V hops left (with wrap); on two sites both
    // polarizations just exchange the sites.
    want(2, 0) = 1.0; // |2,H><1,H|
    want(0, 2) = 1.0; // |1,H><2,H|  (wrap)
    want(1, 3) = 1.0; // |1,V><2,V|
    want(3, 1) = 1.0; // |2,V><1,V|  (wrap)
    CHECK(max_abs(s - want) == 0.0);
}

TEST_CASE("shift on the four-site chain flips polarization at the walls") {
    const Matrix s = build_shift(4, Boundary::fbc);
    Matrix want = Matrix::Zero(8, 8);
    auto idx = [](int site, int c) { return 2 * (site - 1) + c; }; // 1-based site
    for (int n = 1; n < 4; ++n) {
        want(idx(n + 1, 0), idx(n, 0)) = 1.0;
        want(idx(n, 1), idx(n + 1, 1)) = 1.0;
    }
    want(idx(1, 0), idx(1, 1)) = 1.0; // left wall:  V -> H on site 1
    want(idx(4, 1), idx(4, 0)) = 1.0; // right wall: H -> V on site N
    CHECK(max_abs(s - want) == 0.0);
    CHECK(is_permutation(s));
}

TEST_CASE("shift is a permutation for either boundary") {
    CHECK(is_permutation(build_shift(10, Boundary::pbc)));
    CHECK(is_permutation(build_shift(10, Boundary::fbc)));
}

TEST_CASE("gain/loss factor is diag(e^gamma, e^-gamma) per site") {
    const double g = 0.31;
    const Matrix m = build_gain_loss(g, 4);
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(m(2 * n, 2 * n) - std::exp(g)) < 1e-15);
        CHECK(std::abs(m(2 * n + 1, 2 * n + 1) - std::exp(-g)) < 1e-15);
    }
    CHECK(max_abs(m - m.cwiseProduct(Matrix::Identity(8, 8))) == 0.0);
    CHECK(max_abs(build_gain_loss(0.0, 4) - Matrix::Identity(8, 8)) == 0.0);
}

TEST_CASE("one-period operator equals the factor product in both frames") {
    WalkParams p{0.2 * pi, -0.15 * pi, 0.18, 6, Boundary::fbc};
    const Matrix S = build_shift(p.n_sites, p.boundary);
    const Matrix G = build_gain_loss(p.gamma, p.n_sites);

    const Matrix C2h = build_coin(p.theta2 / 2.0, p.n_sites);
    const Matrix C1 = build_coin(p.theta1, p.n_sites);
    CHECK(max_abs(build_floquet(p, Frame::standard) -
                  C2h * G * S * C1 * S * G * C2h) < 1e-14);

    const Matrix C1h = build_coin(p.theta1 / 2.0, p.n_sites);
    const Matrix C2 = build_coin(p.theta2, p.n_sites);
    CHECK(max_abs(build_floquet(p, Frame::shifted) -
                  C1h * S * G * C2 * G * S * C1h) < 1e-14);
}

TEST_CASE("one-period operator is real with unit determinant") {
    for (const Boundary b : {Boundary::pbc, Boundary::fbc}) {
        WalkParams p{0.3 * pi, 0.1 * pi, 0.22, 8, b};
        const Matrix u = build_floquet(p);
        CHECK(max_abs(u - u.conjugate()) == 0.0); // all factors are real
        const complexd det = u.partialPivLu().determinant();
        CHECK(std::abs(det - 1.0) < 1e-10);
    }
}

TEST_CASE("balanced walk is unitary") {
    for (const Frame f : {Frame::standard, Frame::shifted})
        for (const Boundary b : {Boundary::pbc, Boundary::fbc}) {
            WalkParams p{0.2 * pi, -0.15 * pi, 0.0, 12, b};
            const Matrix u = build_floquet(p, f);
            CHECK(max_abs(u * u.adjoint() - Matrix::Identity(24, 24)) < 1e-13);
        }
}

TEST_CASE("trivial-coin momentum blocks have closed-form eigenvalues") {
    // With both coins switched off the walk is two decoupled chiral movers:
    // the block eigenvalues are e^{-2i(p + i gamma)} and e^{+2i(p + i gamma)}.
    WalkParams p{0.0, 0.0, 0.2, 8, Boundary::pbc};
    for (const double k : {0.0, 0.4, 1.3, 2.9, 5.1}) {
        const BlochBlock block = build_bloch_block(p, k, 0.0);
        Eigen::ComplexEigenSolver<Matrix2> es(block.entries);
        REQUIRE(es.info() == Eigen::Success);
        const complexd q(k, p.gamma);
        std::vector<complexd> want = {std::exp(complexd(0, -2.0) * q),
                                      std::exp(complexd(0, 2.0) * q)};
        std::vector<complexd> got = {es.eigenvalues()[0], es.eigenvalues()[1]};
        CHECK(multiset_distance(got, want) < 1e-12);
    }
}

TEST_CASE("dispersion matches its defining formula") {
    WalkParams p{0.2 * pi, 0.45 * pi, 0.3, 8, Boundary::pbc};
    for (const double k : {0.0, 0.7, 2.2, 4.9})
        for (const double d : {0.0, 0.3, -0.1}) {
            const complexd q(k, p.gamma - d);
            const complexd want =
                std::cos(2.0 * q) * std::cos(p.theta1) * std::cos(p.theta2) -
                std::sin(p.theta1) * std::sin(p.theta2);
            CHECK(std::abs(bloch_dispersion(p, k, d) - want) < 1e-14);
        }
    // Deforming by exactly gamma removes the imaginary part of the argument.
    CHECK(std::abs(bloch_dispersion(p, 1.1, p.gamma).imag()) < 1e-15);
}

TEST_CASE("block half-trace satisfies the dispersion contract") {
    for (const Frame f : {Frame::standard, Frame::shifted}) {
        WalkParams p{0.17 * pi, -0.42 * pi, 0.25, 8, Boundary::pbc};
        for (const double k : {0.3, 1.9, 3.8}) {
            const BlochBlock block = build_bloch_block(p, k, 0.1, f);
            const complexd half_trace =
                0.5 * (block.entries(0, 0) + block.entries(1, 1));
            CHECK(std::abs(half_trace - bloch_dispersion(p, k, 0.1)) < 1e-12);
        }
    }
}

TEST_CASE("momentum blocks reproduce the ring spectrum") {
    // The full periodic operator block-diagonalizes over the commensurate
    // momenta p_m = 2 pi m / N; its 2N eigenvalues must equal the union of
    // the 2x2 block eigenvalues there.  Completely independent assembly on
    // the two sides.
    for (const double gamma : {0.0, 0.13}) {
        WalkParams p{0.2 * pi, -0.15 * pi, gamma, 8, Boundary::pbc};
        std::vector<complexd> from_blocks;
        for (int m = 0; m < p.n_sites; ++m) {
            const BlochBlock block =
                build_bloch_block(p, 2.0 * pi * m / p.n_sites, 0.0);
            Eigen::ComplexEigenSolver<Matrix2> es(block.entries);
            REQUIRE(es.info() == Eigen::Success);
            from_blocks.push_back(es.eigenvalues()[0]);
            from_blocks.push_back(es.eigenvalues()[1]);
        }
        const EigenSystem sys = eig_general(build_floquet(p));
        std::vector<complexd> from_matrix(sys.values.data(),
                                          sys.values.data() + sys.values.size());
        CHECK(multiset_distance(from_matrix, from_blocks) < 1e-7);
    }
}

TEST_CASE("protecting symmetries hold at finite gain/loss") {
    for (const Boundary b : {Boundary::pbc, Boundary::fbc}) {
        WalkParams p{0.2 * pi, 0.15 * pi, 0.25, 10, b};
        const SymmetryReport rep = check_symmetries(build_floquet(p));
        CHECK(rep.sublattice < 1e-8);
        CHECK(rep.time_reversal < 1e-8);
        CHECK(rep.particle_hole < 1e-15); // operator is exactly real
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(WalkParams{0.1, 0.2, 0.0, 5}.validate(), invalid_parameter);
    CHECK_THROWS_AS(WalkParams{0.1, 0.2, 0.0, 2}.validate(), invalid_parameter);
    CHECK_THROWS_AS(WalkParams{0.1, 0.2, std::nan(""), 8}.validate(),
                    invalid_parameter);
    CHECK_THROWS_AS(build_coin(0.1, 0), invalid_parameter);
    CHECK_THROWS_AS(build_shift(1, Boundary::pbc), invalid_parameter);
    CHECK_THROWS_AS(build_gain_loss(std::nan(""), 4), invalid_parameter);
    CHECK_THROWS_AS(check_symmetries(Matrix::Zero(4, 4)), invalid_parameter);
    CHECK_THROWS_AS(check_symmetries(Matrix::Zero(3, 3)), invalid_parameter);
}
