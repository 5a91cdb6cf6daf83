#pragma once

// Operators of the nonunitary discrete-time quantum walk:
//
//   U  = C(theta2/2) G S C(theta1) S G C(theta2/2)       (standard frame)
//   U' = C(theta1/2) S G C(theta2) G S C(theta1/2)       (shifted frame)
//
// on a chain of N sites with a two-dimensional coin (polarization) space.
// C is a per-site coin rotation, S a coin-conditioned shift, and
// G = diag(e^gamma, e^-gamma) a per-site gain/loss factor.  Basis ordering
// is site-major, coin-minor: index(n, c) = 2*(n-1) + c with c = 0 for |H>
// and c = 1 for |V>, n = 1..N.
//
// Boundaries: PBC wraps the shift around the ring; FBC ("flip" boundaries)
// reflects the polarization at the two chain ends instead, keeping the
// shift a permutation.

#include <complex>
#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;

enum class Boundary { pbc, fbc };
enum class Frame { standard, shifted };

struct WalkParams {
    double theta1 = 0.0;
    double theta2 = 0.0;
    double gamma = 0.0;
    int n_sites = 60;
    Boundary boundary = Boundary::fbc;

    // Throws invalid_parameter unless n_sites is even and >= 4 and gamma
    // is finite.
    void validate() const;
};

// Block-diagonal coin rotation, one [[cos t, -sin t], [sin t, cos t]]
// block per site.  n_sites >= 1.
Matrix build_coin(double theta, int n_sites);

// Coin-conditioned shift: |H> moves right, |V> moves left.  PBC adds the
// wrap-around terms; FBC flips the polarization at sites 1 and N.  The
// result is a permutation matrix in either case.  n_sites >= 2.
Matrix build_shift(int n_sites, Boundary boundary);

// Block-diagonal gain/loss factor diag(e^gamma, e^-gamma) per site.
Matrix build_gain_loss(double gamma, int n_sites);

// One-period evolution operator in the requested time frame.
Matrix build_floquet(const WalkParams& params, Frame frame = Frame::standard);

// Half-trace dispersion of the momentum-space walk,
//   D = cos(2*(p + i*(gamma - deformation))) cos(theta1) cos(theta2)
//       - sin(theta1) sin(theta2).
// deformation = 0 gives the Bloch dispersion (complex for gamma != 0);
// deformation = gamma cancels the gain/loss and D is real (the deformed,
// non-Bloch dispersion).
complexd bloch_dispersion(const WalkParams& params, double p, double deformation);

struct BlochBlock {
    double momentum = 0.0;
    double deformation = 0.0;
    Matrix2 entries;
};

// Momentum-space 2x2 block of the walk, assembled from the same factor
// product as build_floquet with the shift replaced by
// S(beta) = diag(1/beta, beta), beta = e^deformation * e^{i p}.  The
// Fourier-sign convention is pinned by the contract
// (1/2) trace = bloch_dispersion(params, p, deformation); a mismatch
// beyond 1e-10 throws consistency_error.
BlochBlock build_bloch_block(const WalkParams& params, double p,
                             double deformation, Frame frame = Frame::standard);

struct SymmetryReport {
    double sublattice = 0.0;    // max norm of  Gam U Gam - U^{-1}
    double time_reversal = 0.0; // max norm of  T U* T^{-1} - U^{-1}
    double particle_hole = 0.0; // max norm of  Xi U* Xi^{-1} - U
};

// Residuals of the protecting symmetries with Gam = T = (+) sigma_x per
// site and Xi = identity (so the particle-hole relation reduces to U being
// real).  Throws on a numerically singular U.
SymmetryReport check_symmetries(const Matrix& U);

} // namespace qwalk
