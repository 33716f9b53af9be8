#pragma once

#include <filesystem>

#include "csv.hpp"

namespace eadam {

enum class PlotMetric { Loss, GradNorm, EffStepMean };

PlotMetric metric_from_string(const std::string& name);
const char* metric_name(PlotMetric metric);

// Renders one polyline per run (grouped by run_id) with a legend. Series are
// truncated at their first non-finite metric value and flagged "(diverged)"
// in the legend. log_y uses a log10 axis and drops non-positive values.
void emit_svg(const std::vector<TrajectoryRecord>& records, PlotMetric metric,
              const std::filesystem::path& path, bool log_y);

}  // namespace eadam
