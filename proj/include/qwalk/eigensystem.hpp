#pragma once

// Dense non-Hermitian eigendecomposition with biorthogonal left/right
// pairing.  Right vectors satisfy M r = lambda r; left vectors satisfy
// M^H l = conj(lambda) l and are rescaled so <l_j|r_j> = 1 wherever the
// pair is numerically non-defective.

#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

struct EigenSystem {
    Vector values;             // eigenvalues, in the right-solver's order
    Matrix right_vectors;      // unit-norm columns
    Matrix left_vectors;       // columns aligned with values; <l_j|r_j> = 1
    std::vector<int> pairing;  // left-solver column matched to each value
    double min_biorthogonality = 1.0; // min_j |<l_j|r_j>| / (|l_j||r_j|)
    bool degraded = false;     // true near a defective (non-diagonalizable) point
};

// Full decomposition of a square complex matrix (dimension <= 1024).
// Left eigenvectors come from the decomposition of the adjoint; the two
// eigenvalue sets are matched greedily by conjugate proximity, and clusters
// of (near-)degenerate eigenvalues are re-biorthogonalized by a small
// linear solve.  Solver non-convergence throws; it never returns garbage.
EigenSystem eig_general(const Matrix& M);

// E = i ln(lambda) with Re E in (-pi, pi]; the branch point is
// canonicalized to +pi.  lambda = 0 throws invalid_parameter.
complexd quasienergy_from_eigenvalue(complexd lambda);

} // namespace qwalk
