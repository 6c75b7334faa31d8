#pragma once

namespace fqmag {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kReportSchema = "fqmag.report.v1";

} // namespace fqmag
