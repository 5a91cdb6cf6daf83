#pragma once

// Closed-form eigensystem of a momentum block of the walk.  Every block
// produced by build_bloch_block has the chiral-basis structure
//
//   B = D*I - i*(x*sigma_y + y*sigma_z) = [[D - i y, -x], [x, D + i y]]
//
// with unit determinant, so D^2 + x^2 + y^2 = 1.  Writing zeta = y + i x,
// zeta' = y - i x and rho = sqrt(zeta zeta') (branch tracked by
// continuity along a contour), the eigenpairs are
//
//   lambda_pm = D -/+ i rho,
//   R+ = (rho + zeta, zeta - rho)^T,    R- = (zeta - rho, zeta + rho)^T,
//   L+ = (rho + zeta', zeta' - rho),    L- = (zeta' - rho, zeta' + rho),
//
// where the left covectors act bilinearly (no conjugation) and satisfy
// L+ R- = L- R+ = 0 and L+- R+- = 4 rho^2 exactly.  The lifts are smooth,
// single-valued, and bounded below by |R|^2 >= 2|rho|^2, so they never
// vanish on a gapped contour; this makes discrete Wilson products built
// from them free of pivot changes and phase unwrapping.

#include <complex>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk::detail {

struct BlockEigen {
    std::complex<double> d, x, y, rho;

    std::complex<double> lambda(int band) const {
        const std::complex<double> i(0.0, 1.0);
        return band == 0 ? d - i * rho : d + i * rho;
    }
    Eigen::Vector2cd right(int band) const {
        const std::complex<double> zeta = y + std::complex<double>(0, 1) * x;
        if (band == 0) return {rho + zeta, zeta - rho};
        return {zeta - rho, zeta + rho};
    }
    Eigen::Vector2cd left(int band) const { // bilinear row covector
        const std::complex<double> zetap = y - std::complex<double>(0, 1) * x;
        if (band == 0) return {rho + zetap, zetap - rho};
        return {zetap - rho, zetap + rho};
    }
};

// Decompose a block; when rho_prev is given, pick the branch of rho
// closest to it (continuity along a contour).  Throws consistency_error
// if the block has a sigma_x component, which the walk's blocks never do.
inline BlockEigen block_eigen(const Eigen::Matrix2cd& block,
                              const std::complex<double>* rho_prev = nullptr) {
    BlockEigen be;
    be.d = 0.5 * (block(0, 0) + block(1, 1));
    be.y = (block(1, 1) - block(0, 0)) / std::complex<double>(0, 2);
    be.x = 0.5 * (block(1, 0) - block(0, 1));
    const double scale = block.cwiseAbs().maxCoeff();
    if (std::abs(block(0, 1) + block(1, 0)) > 1e-10 * std::max(1.0, scale))
        throw consistency_error("momentum block has an off-diagonal symmetric part");
    const std::complex<double> zeta = be.y + std::complex<double>(0, 1) * be.x;
    const std::complex<double> zetap = be.y - std::complex<double>(0, 1) * be.x;
    be.rho = std::sqrt(zeta * zetap);
    if (rho_prev && std::abs(be.rho - *rho_prev) > std::abs(-be.rho - *rho_prev))
        be.rho = -be.rho;
    return be;
}

} // namespace qwalk::detail
