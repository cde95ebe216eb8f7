#pragma once

namespace grasph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace grasph
