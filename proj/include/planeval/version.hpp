#pragma once

#include <string_view>

namespace planeval {

inline constexpr std::string_view kToolName = "planeval";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace planeval
