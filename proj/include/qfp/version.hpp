#pragma once

namespace qfp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qfp
