#pragma once

#include <filesystem>

#include "core.hpp"

namespace eadam {

// One log row per optimizer step. All numeric fields are finite; divergence
// is recorded in the run summary, not as non-finite rows.
struct TrajectoryRecord {
    std::string run_id;
    std::string optimizer;
    std::uint64_t seed = 0;
    std::uint64_t step = 0;
    double lr = 0.0;
    double loss = 0.0;
    double grad_norm = 0.0;
    double param_norm = 0.0;
    double eff_step_mean = 0.0;
    double eff_step_max = 0.0;
};

inline constexpr const char* kTrajectoryHeader =
    "run_id,optimizer,seed,step,lr,loss,grad_norm,param_norm,eff_step_mean,eff_step_max";

// UTF-8, LF line endings, rows sorted by (run_id, step), floats in shortest
// round-trip decimal. Rejects empty input and ids containing ',' or newlines.
void emit_csv(const std::vector<TrajectoryRecord>& records, const std::filesystem::path& path);

// Strict inverse of emit_csv (exact header, one row per line).
std::vector<TrajectoryRecord> parse_csv(const std::filesystem::path& path);

}  // namespace eadam
