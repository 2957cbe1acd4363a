#pragma once

namespace afa {

inline constexpr const char* kToolkitName = "afa-toolkit";
inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace afa
