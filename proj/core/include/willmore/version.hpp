#pragma once

namespace willmore {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace willmore
