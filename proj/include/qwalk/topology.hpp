#pragma once

// Bloch and non-Bloch (deformed-contour) winding numbers from discrete
// biorthogonal Wilson loops, and their assembly into the invariant pair
// (nu0, nupi) counting protected modes at quasienergy 0 and pi.

#include <functional>
#include <vector>

#include "qwalk/walk.hpp"

namespace qwalk {

enum class Contour { bloch, gbz };

struct BerryPhaseResult {
    double phase_plus = 0.0;  // Wilson phase of the upper band
    double phase_minus = 0.0; // Wilson phase of the lower band
    double total = 0.0;       // phase_plus + phase_minus
    int n_k = 0;              // grid size that met the convergence criterion
};

// Deterministic per-sample gauge factors, injectable for gauge-invariance
// validation: gauge(j, band) multiplies the sampled right eigenvector.
using GaugeInjector = std::function<complexd(int, int)>;

// Discrete Wilson-loop Berry phases of the two bands along a closed
// momentum contour (n_k uniform samples of p in [0, 2pi), wrapped).
// contour bloch evaluates the momentum blocks at deformation 0, gbz at
// deformation gamma.  The grid is doubled until the total phase moves by
// less than 0.01 * 2pi, capped at 8192 samples; failure to settle throws
// resolution_error, and a band gap collapsing along the contour
// (min |lambda+ - lambda-| <= 1e-6) throws precondition_error.
// The accumulator canonicalizes every sampled eigenvector ray, so the
// result is exactly independent of any phase gauge on the samples.
BerryPhaseResult berry_phase(const WalkParams& params, Frame frame,
                             Contour contour, int n_k = 512,
                             const GaugeInjector& gauge = {});

struct InvariantPair {
    double nu0 = 0.0;        // (nu + nu') / 2, rounded to half-integers
    double nupi = 0.0;       // (nu - nu') / 2, rounded to half-integers
    Contour contour = Contour::bloch;
    double nu = 0.0;         // standard-frame winding, rounded
    double nu_prime = 0.0;   // shifted-frame winding, rounded
    double nu_raw = 0.0;     // raw phase totals / 2pi before rounding
    double nu_prime_raw = 0.0;
};

// Runs berry_phase in both time frames, rounds each frame winding to the
// nearest half-integer (residual >= 0.05 throws resolution_error) and
// assembles (nu0, nupi).
InvariantPair invariants(const WalkParams& params, Contour contour,
                         int n_k = 512);

// The deformed momentum contour: n_k points beta = e^gamma e^{ip} on the
// circle of radius e^gamma.
std::vector<complexd> gbz_contour(double gamma, int n_k);

} // namespace qwalk
