#pragma once

namespace irsbc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace irsbc
