#pragma once
// Closed-form edge-mode analytics for the gain/loss split-step walk under
// reflecting boundaries: localization constants, inverse localization
// lengths, analytic amplitude profiles, phase boundaries in theta2, and
// the transfer classification of edge-mode pairs.
//
// Conventions.  A boundary mode sits in one of two quasienergy sectors,
// E = 0 or E = pi (eigenvalue +1 or -1 of the one-period operator), and
// carries a sublattice eigenvalue eta = +-1 of Gamma = I (x) sigma_x, so
// its coin state on every site is proportional to |H> + eta |V>.  The
// reflection constants
//
//     R(theta) = sec(theta) - tan(theta) = tan(pi/4 - theta/2)
//
// evaluated at the two coin angles control everything: with R1 = R(theta1),
// R2 = R(theta2) the sector constants are Z_0 = R1 and Z_pi = -1/R1, and
// the per-unit-cell decay exponent of an (alpha, eta) mode is
//
//     T      = (eta/2) ln |Z_alpha R2|          (balanced walk)
//     T~     = gamma + T                        (gain/loss included)
//
// Site amplitudes obey the signed two-site recursion
//
//     a_{2m+1} = s e^{2 T~} a_{2m-1},   s = sign(Z_alpha R2),
//     a_{2m}   = eta Z_alpha^eta a_{2m-1},
//
// normalized so that sum_n |a_n|^2 = 1/2 (unit total norm once both coin
// channels are included).  sign(T~) picks the localization edge: negative
// decays from the left boundary, positive from the right.

#include <optional>
#include <vector>

#include "qwalk/errors.hpp"
#include "qwalk/spectra.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// Quasienergy sector of a boundary mode.
enum class AlphaSector { zero, pi };

/// Reflection/localization constants derived from the two coin angles.
struct LocalizationConstants {
    double r1;  ///< R(theta1)
    double r2;  ///< R(theta2)
    double z0;  ///< Z_0  = R1
    double zpi; ///< Z_pi = -1/R1
};

/// R(theta) = sec(theta) - tan(theta).  Throws precondition_error at the
/// poles (|cos theta| <= 1e-12), where the reflection constant is undefined.
double coin_reflection(double theta);

LocalizationConstants localization_constants(double theta1, double theta2);

/// Inverse localization lengths of the (alpha, eta) mode.
struct InverseLocalization {
    double t;       ///< balanced-walk exponent T
    double t_tilde; ///< T~ = gamma + T
};

InverseLocalization inverse_localization(const WalkParams& params,
                                         AlphaSector alpha, int eta);

/// Gap-closing lines of the balanced walk in theta2 at fixed theta1,
/// folded into (-pi, pi] and sorted; duplicates merged.
struct BoundarySet {
    std::vector<double> zero; ///< theta2 values closing the E = 0 gap
    std::vector<double> pi;   ///< theta2 values closing the E = pi gap
};

BoundarySet phase_boundaries(double theta1);

/// Closed-form amplitude profile of one boundary mode.  Pure formula
/// evaluation: whether the mode actually exists (nonzero invariant) is
/// the caller's concern.
struct EdgeModeAnalytic {
    AlphaSector alpha;
    int eta;                            ///< +1 or -1
    std::vector<double> amplitudes_odd; ///< a_{2m-1}, m = 1..N/2 (signed)
    std::vector<double> amplitudes_even;///< a_{2m},   m = 1..N/2 (signed)
    double t_tilde;                     ///< decay exponent T~
    double coin_state[2];               ///< unnormalized (1, eta)
    int n_sites;

    /// Assemble the full 2N-component state: site n carries amplitude
    /// a_n on |H> and eta a_n on |V>.  Unit norm by construction.
    Vector materialize() const;
};

/// Evaluate the closed-form profile.  The generic branch is a geometric
/// progression with ratio s e^{2 T~}; when |T~| < 1e-12 the profile
/// degenerates to a flat one, |a_{2m-1}| = sqrt(1 / (N (1 + Z^{2 eta}))),
/// with the sign alternation retained.  Both branches keep
/// sum_n |a_n|^2 = 1/2 exactly.
EdgeModeAnalytic analytic_edge_mode(const WalkParams& params,
                                    AlphaSector alpha, int eta);

/// Outcome of checking an analytic mode against a numerically
/// diagonalized reflecting-boundary spectrum.
struct FidelityReport {
    double fidelity;            ///< |P_numeric psi|^2, P = degenerate-pair projector
    double eigen_residual;      ///< ||U psi - lambda psi||
    double sublattice_residual; ///< ||Gamma psi - eta psi||
    complexd eigenvalue;        ///< target eigenvalue (+1 or -1)
};

/// Project the analytic (alpha, eta) mode onto the numerically obtained
/// degenerate alpha-pair of `spectrum` (full-matrix FBC, same params).
/// Requires exactly two eigenvalues within 1e-6 of the sector center and
/// a comfortably open bulk gap, else precondition_error.
FidelityReport verify_against_numeric(const WalkParams& params,
                                      AlphaSector alpha, int eta,
                                      const QuasienergySpectrum& spectrum);

/// Where the two eta partners of each degenerate edge pair sit.
/// In `opposite_edges` both sectors keep one partner per boundary; in the
/// transferred regions the named sector's pair co-localizes at one edge.
enum class TransferRegion {
    opposite_edges = 1,
    zero_transferred = 2,
    pi_transferred = 3,
    both_transferred = 4,
};

struct TransferClass {
    int s_zero; ///< sign[T~_0(+1) T~_0(-1)]
    int s_pi;   ///< sign[T~_pi(+1) T~_pi(-1)]
    TransferRegion region;
    /// Set by transfer_classification_with_loop: true when the
    /// spectral-loop diagnostic agrees with (s_zero, s_pi).
    std::optional<bool> loop_agreement;
    std::optional<LoopClassification> loops;
};

/// Classify from the signs of the inverse localization lengths alone.
/// Throws precondition_error when any |T~| < 1e-12 (transition point).
TransferClass transfer_classification(const WalkParams& params);

/// Same, plus the periodic-spectrum loop diagnostic: the pair transfers
/// exactly when the sector's spectral loop winds around its quasienergy,
/// and the agreement of the two criteria is recorded.
TransferClass transfer_classification_with_loop(const WalkParams& params,
                                                int n_k = 512);

/// theta2 roots of T~_alpha(eta) = 0 at fixed gamma, theta1: the
/// boundaries of the transfer regions along a theta2 line.  Closed form
/// via R(theta) = tan(pi/4 - theta/2); folded into (-pi, pi], sorted,
/// duplicates merged (at gamma = 0 the roots collapse pairwise onto the
/// gap-closing lines).
std::vector<double> transfer_boundaries(double gamma, double theta1,
                                        AlphaSector alpha);

} // namespace qwalk
