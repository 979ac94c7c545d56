#pragma once

namespace svi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace svi
