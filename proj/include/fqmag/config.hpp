#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fqmag {

struct GridPoint {
    int p = 0;
    int n = 0;
    int d = 0;
    bool operator==(const GridPoint&) const = default;
};

// Everything a run needs, expressible as a plain-text key=value file.
// set_specs empty means "build the standard corpus per grid point".
struct ExperimentConfig {
    std::vector<GridPoint> grid;
    std::vector<int> k_values{2, 3, 4};
    std::vector<std::string> set_specs;
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::vector<std::string> checks; // subset of all_checks(); empty is invalid
    double tolerance = 1e-8;
    std::string out_csv = "fqmag_report.csv";
    std::string out_json = "fqmag_report.json";
    int parallelism = 0; // 0: hardware concurrency
    bool timing = false; // false keeps the seconds column at 0.000 for byte-stable reports
    std::uint64_t master_seed = 1;
    int trials = 8; // extension-constant sampling trials per radius

    bool operator==(const ExperimentConfig&) const = default;
};

const std::vector<std::string>& all_checks();

// key = value lines; lists comma-separated except set_specs, which uses '|'
// because generator specs contain commas. Full-line '#' comments allowed.
// Round trip parse(serialize(c)) == c is lossless.
ExperimentConfig parse_config(const std::string& text); // throws ConfigInvalid
std::string serialize_config(const ExperimentConfig& cfg);

ExperimentConfig load_config_file(const std::string& path); // throws ConfigInvalid

// The grid q in {3,5,7,9} x d in {2,4} plus (3,6) and (3,8), k in {2,3,4},
// standard corpus, all checks, seeds {1,2,3}.
ExperimentConfig acceptance_preset();

} // namespace fqmag
