#pragma once

namespace meshspectra {

inline constexpr const char* kToolVersion = "meshspectra 0.1.0";

}  // namespace meshspectra
