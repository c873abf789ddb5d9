#pragma once

namespace magkin {

inline constexpr const char* version = "0.1.0";

}  // namespace magkin
