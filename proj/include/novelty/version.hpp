#pragma once

namespace novelty {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace novelty
