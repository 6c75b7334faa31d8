#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fqmag/config.hpp"

namespace fqmag {

// One check outcome. status: "pass" / "fail" for constant-free checks,
// "tracked" for measured implied constants, "skipped" when a hypothesis
// gate is not met. extras surface only in the JSON mirror.
struct ReportRow {
    int p = 0;
    int n = 0;
    int d = 0;
    std::int64_t q = 0;
    std::string set;
    std::string check;
    bool hypothesis_met = true;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string status = "pass";
    double ratio = 0.0;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> extras;
};

// Leading "# schema=..." line, then a fixed header row; set labels are
// always double-quoted (they contain commas), numbers use %.12g, seconds
// prints with three decimals and stays 0.000 unless timing was enabled.
std::string report_to_csv(const std::vector<ReportRow>& rows);

// JSON mirror with provenance: schema/version, the serialized config that
// produced the rows, and per-row extras.
std::string report_to_json(const std::vector<ReportRow>& rows, const ExperimentConfig& cfg);

void write_text_file(const std::string& path, const std::string& content);

} // namespace fqmag
