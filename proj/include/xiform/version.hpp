#pragma once

namespace xiform {

inline constexpr const char* kToolName = "xiform";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace xiform
