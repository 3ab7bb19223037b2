#pragma once

namespace jumpcode {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jumpcode
