#pragma once

namespace gagt {

inline constexpr const char* kVersion = "0.1.0";

} // namespace gagt
