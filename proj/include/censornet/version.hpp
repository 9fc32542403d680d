#pragma once

namespace censornet {
inline constexpr const char* kVersion = "1.0.0";
}
