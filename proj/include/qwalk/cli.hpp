#pragma once
// Command-line driver.  Exit codes: 0 success, 1 usage error, 2 numerical
// precondition failed (gapless / boundary / transition point), 3
// verification failure (fidelity suite or selftest).

#include <string>

namespace qwalk {

/// Full CLI entry point (also used by the test harness).
int cli_main(int argc, const char* const* argv);

/// Parse an angle that may carry a literal "pi" suffix: "0.2pi" -> 0.2*pi,
/// "-pi" -> -pi, "1.5" -> 1.5 (plain radians).  Throws invalid_parameter.
double parse_angle(const std::string& text);

} // namespace qwalk
