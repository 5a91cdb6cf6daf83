#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base class of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user-supplied value: invalid lattice size, angle at a pole of the
// reflection coefficient, malformed sweep axis, unknown enum value, ...
class invalid_parameter : public error {
public:
    using error::error;
};

// Parameters violate a numerical precondition of the requested computation:
// gap closes along the contour, target quasienergy sits on the spectral
// curve, transfer-boundary point, required degenerate pair missing.
class precondition_error : public error {
public:
    using error::error;
};

// A discretized quantity failed to converge under grid refinement.
class resolution_error : public error {
public:
    using error::error;
};

// An internal cross-check failed; indicates a bug, never a user mistake.
class consistency_error : public error {
public:
    using error::error;
};

// File input/output failure; message carries the offending path.
class io_error : public error {
public:
    using error::error;
};

} // namespace qwalk
