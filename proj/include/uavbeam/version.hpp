#pragma once

namespace uavbeam {

inline constexpr const char* kToolName = "uavbeam";
inline constexpr const char* kToolVersion = "0.1.0";

}
