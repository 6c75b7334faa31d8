#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqmag/config.hpp"
#include "fqmag/report.hpp"
#include "fqmag/space.hpp"

namespace fqmag {

struct RunResult {
    std::vector<ReportRow> rows;
    std::int64_t failures = 0; // rows with status "fail"
    int exit_code = 0;         // 0 clean, 1 when any constant-free check failed
};

// The per-grid-point corpus when the config leaves set_specs empty: random
// sets at densities {0.05, 0.1, 0.25, 0.5} for each seed (deduplicated at
// tiny q^d where sizes collide), the subfield set when n >= 2, sphere caps
// at t in {1, 2}, two affine flats, a singleton, the full space, and a
// three-point explicit set. Always at least 20 labeled instances.
std::vector<std::string> standard_corpus(const Space& sp,
                                         const std::vector<std::uint64_t>& seeds);

// Subfield sharpness demonstration: E = F_p^d inside F_{p^2}^d has
// |E| = q^{d/2} and exactly p distinct magnitudes for every k >= 2.
ReportRow sharpness_row(int p, int d, int k);

// Fans grid points out to a worker pool, assembles rows in grid order.
// Identical configs (including seeds) produce identical rows regardless of
// the parallelism degree.
RunResult run_experiment(const ExperimentConfig& cfg);

} // namespace fqmag
