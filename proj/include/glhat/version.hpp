#pragma once

namespace glhat {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "glhat-report/v1";

}  // namespace glhat
