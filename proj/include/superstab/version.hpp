#pragma once

namespace superstab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace superstab
