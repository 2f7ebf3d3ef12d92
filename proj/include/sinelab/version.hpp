#pragma once

namespace sinelab {
inline constexpr const char* kVersion = "sinelab 0.1.0";
}
