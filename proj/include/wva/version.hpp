#pragma once

namespace wva {

inline constexpr const char* tool_name = "wvasim";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace wva
