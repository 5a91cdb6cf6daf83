#include "qwalk/walk.hpp"

#include <cmath>

namespace qwalk {

void WalkParams::validate() const {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw invalid_parameter("n_sites must be an even integer >= 4, got " +
                                std::to_string(n_sites));
    if (!std::isfinite(gamma))
        throw invalid_parameter("gamma must be finite");
    if (!std::isfinite(theta1) || !std::isfinite(theta2))
        throw invalid_parameter("coin angles must be finite");
}

Matrix build_coin(double theta, int n_sites) {
    if (n_sites < 1)
        throw invalid_parameter("build_coin: n_sites must be >= 1");
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix m = Matrix::Zero(2 * n_sites, 2 * n_sites);
    for (int n = 0; n < n_sites; ++n) {
        m(2 * n, 2 * n) = c;
        m(2 * n, 2 * n + 1) = -s;
        m(2 * n + 1, 2 * n) = s;
        m(2 * n + 1, 2 * n + 1) = c;
    }
    return m;
}

Matrix build_shift(int n_sites, Boundary boundary) {
    if (n_sites < 2)
        throw invalid_parameter("build_shift: n_sites must be >= 2");
    const int N = n_sites;
    Matrix m = Matrix::Zero(2 * N, 2 * N);
    auto idx = [](int n, int c) { return 2 * n + c; }; // n is 0-based here
    for (int n = 0; n + 1 < N; ++n) {
        m(idx(n + 1, 0), idx(n, 0)) = 1.0;     // |n+1,H><n,H|
        m(idx(n, 1), idx(n + 1, 1)) = 1.0;     // |n,V><n+1,V|
    }
    if (boundary == Boundary::pbc) {
        m(idx(0, 0), idx(N - 1, 0)) = 1.0;     // wrap |1,H><N,H|
        m(idx(N - 1, 1), idx(0, 1)) = 1.0;     // wrap |N,V><1,V|
    } else {
        m(idx(0, 0), idx(0, 1)) = 1.0;         // flip |1,H><1,V|
        m(idx(N - 1, 1), idx(N - 1, 0)) = 1.0; // flip |N,V><N,H|
    }
    return m;
}

Matrix build_gain_loss(double gamma, int n_sites) {
    if (n_sites < 1)
        throw invalid_parameter("build_gain_loss: n_sites must be >= 1");
    if (!std::isfinite(gamma))
        throw invalid_parameter("build_gain_loss: gamma must be finite");
    Matrix m = Matrix::Zero(2 * n_sites, 2 * n_sites);
    const double gp = std::exp(gamma), gm = std::exp(-gamma);
    for (int n = 0; n < n_sites; ++n) {
        m(2 * n, 2 * n) = gp;
        m(2 * n + 1, 2 * n + 1) = gm;
    }
    return m;
}

Matrix build_floquet(const WalkParams& params, Frame frame) {
    params.validate();
    const int N = params.n_sites;
    const Matrix S = build_shift(N, params.boundary);
    const Matrix G = build_gain_loss(params.gamma, N);
    if (frame == Frame::standard) {
        const Matrix Ch = build_coin(params.theta2 / 2.0, N);
        const Matrix C1 = build_coin(params.theta1, N);
        return Ch * G * S * C1 * S * G * Ch;
    }
    const Matrix Ch = build_coin(params.theta1 / 2.0, N);
    const Matrix C2 = build_coin(params.theta2, N);
    return Ch * S * G * C2 * G * S * Ch;
}

complexd bloch_dispersion(const WalkParams& params, double p, double deformation) {
    const complexd q(p, params.gamma - deformation);
    return std::cos(2.0 * q) * std::cos(params.theta1) * std::cos(params.theta2) -
           std::sin(params.theta1) * std::sin(params.theta2);
}

namespace {

Matrix2 coin2(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Matrix2 m;
    m << c, -s, s, c;
    return m;
}

} // namespace

BlochBlock build_bloch_block(const WalkParams& params, double p,
                             double deformation, Frame frame) {
    const complexd beta = std::exp(complexd(deformation, p));
    Matrix2 S = Matrix2::Zero();
    S(0, 0) = 1.0 / beta;
    S(1, 1) = beta;
    Matrix2 G = Matrix2::Zero();
    G(0, 0) = std::exp(params.gamma);
    G(1, 1) = std::exp(-params.gamma);

    Matrix2 block;
    if (frame == Frame::standard) {
        const Matrix2 Ch = coin2(params.theta2 / 2.0);
        const Matrix2 C1 = coin2(params.theta1);
        block = Ch * G * S * C1 * S * G * Ch;
    } else {
        const Matrix2 Ch = coin2(params.theta1 / 2.0);
        const Matrix2 C2 = coin2(params.theta2);
        block = Ch * S * G * C2 * G * S * Ch;
    }

    const complexd half_trace = 0.5 * (block(0, 0) + block(1, 1));
    const complexd want = bloch_dispersion(params, p, deformation);
    if (std::abs(half_trace - want) > 1e-10 * std::max(1.0, std::abs(want)))
        throw consistency_error("bloch block trace does not match the dispersion");

    return BlochBlock{p, deformation, block};
}

SymmetryReport check_symmetries(const Matrix& U) {
    if (U.rows() != U.cols() || U.rows() == 0 || U.rows() % 2 != 0)
        throw invalid_parameter("check_symmetries: expected a square even-dimensional matrix");

    Eigen::FullPivLU<Matrix> lu(U);
    if (!lu.isInvertible())
        throw invalid_parameter("check_symmetries: singular operator");
    const Matrix Uinv = lu.inverse();

    const Eigen::Index dim = U.rows();
    // Gam = T = sigma_x on every site: swap the two coin rows/columns.
    auto sigma_x_conj = [&](const Matrix& M) {
        Matrix R(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j)
                R(i ^ 1, j ^ 1) = M(i, j);
        return R;
    };

    SymmetryReport rep;
    rep.sublattice = (sigma_x_conj(U) - Uinv).cwiseAbs().maxCoeff();
    rep.time_reversal = (sigma_x_conj(U.conjugate()) - Uinv).cwiseAbs().maxCoeff();
    rep.particle_hole = (U.conjugate() - U).cwiseAbs().maxCoeff();
    return rep;
}

} // namespace qwalk
