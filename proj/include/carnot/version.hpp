#pragma once

namespace carnot {

inline constexpr const char* version_string = "0.1.0";

} // namespace carnot
