#pragma once

namespace relie {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relie
