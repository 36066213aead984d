#pragma once

namespace triality {

inline constexpr const char* kToolName = "triality";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace triality
