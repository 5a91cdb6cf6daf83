#pragma once

namespace qwalk {

inline constexpr const char* version = "1.0.0";

} // namespace qwalk
