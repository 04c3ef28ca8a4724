#pragma once

namespace sogm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sogm
