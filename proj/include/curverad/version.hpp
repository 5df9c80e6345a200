#pragma once

namespace curverad {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace curverad
