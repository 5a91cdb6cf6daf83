#pragma once

// Quasienergy spectra under both boundary conditions, spectral-loop
// winding diagnostics in the complex quasienergy plane, and the
// center-of-mass skin-effect report.

#include <vector>

#include "qwalk/eigensystem.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class SpectrumSource { full_matrix, bloch_sampled };

struct QuasienergySpectrum {
    WalkParams params;
    std::vector<complexd> energies;
    // Right eigenvectors, one column per energy.  2N-dimensional for
    // full-matrix spectra; 2-dimensional momentum-block vectors for
    // Bloch-sampled spectra.
    Matrix modes;
    SpectrumSource source = SpectrumSource::full_matrix;
    // Bloch-sampled only: momentum grid; energies are stored band-major
    // as energies[2*j + band] for momentum index j.
    std::vector<double> momenta;
};

// Full-matrix spectrum under flip boundaries.  The eigenproblem is
// balanced by the diagonal site gauge diag(e^{-gamma(n-1)}) (an exact
// similarity that keeps the matrix bandwidth-bounded and its spectrum
// unchanged) before calling the dense solver; eigenvectors are mapped
// back through the gauge, so the skin-effect envelope is preserved to
// full relative precision.  Modes are unit-norm.
QuasienergySpectrum spectrum_fbc(const WalkParams& params);

// Momentum-space spectrum from the 2x2 Bloch blocks (deformation 0) on a
// uniform n_k-point grid over p in [0, 2pi).  Bands are ordered by
// eigenvector-overlap continuity from one grid point to the next.
// Requires n_k >= 64.
QuasienergySpectrum spectrum_pbc_bloch(const WalkParams& params, int n_k);

struct LoopClassification {
    int winding_about_zero = 0;
    int winding_about_pi = 0;
    bool inside_zero = false;
    bool inside_pi = false;
};

// Winding of the closed PBC spectral curve around the quasienergies 0 and
// pi.  Computed in the eigenvalue plane lambda = e^{-iE}, where the curve
// is closed without strip unwrapping and the winding about lambda0 =
// e^{-iE0} equals the quasienergy-plane winding about E0 (the map is
// conformal and one-to-one on the strip).  Accumulates the argument
// increments per continuity-tracked band and sums the bands.  Throws if a
// target sits on the curve (distance < 1e-6) or if the accumulated
// winding fails to round to an integer (residual >= 0.05).
LoopClassification loop_classification(const WalkParams& params, int n_k);

struct SkinReport {
    std::vector<double> mean_positions; // center of mass per mode, in sites
    double fraction_right = 0.0;        // bulk modes with mean position > N/2
    std::vector<double> ipr;            // site-space inverse participation ratio
};

// Center-of-mass localization diagnostic over a full-matrix FBC spectrum.
// A mode is "bulk" when its quasienergy is farther than bulk_filter from
// both 0 and pi (distance to pi taken modulo the 2pi strip).
SkinReport skin_report(const QuasienergySpectrum& spectrum, double bulk_filter);

// Strip distances of a quasienergy to the protected points 0 and pi.
double distance_to_zero(complexd energy);
double distance_to_pi(complexd energy);

} // namespace qwalk
