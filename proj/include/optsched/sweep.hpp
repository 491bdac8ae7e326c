#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optsched/config.hpp"

namespace optsched {

/// One resolved point of the cartesian sweep, plus the axis values echoed
/// into the CSV row.
struct SweepPoint {
    SimParams params;
    PolicySpec policy;
    TrafficSpec traffic;
    double rho = 0.0;
    std::optional<double> delta;
    std::optional<double> gamma;
    std::optional<std::int64_t> frame_t;
    std::optional<std::int64_t> window_w;
};

/// Cartesian product of the configured axes and seeds, in axis-list order
/// (policy, rho, delta_r, delta, gamma, T, W, then seed innermost). Axis
/// overrides that do not apply to a point's policy kind are ignored.
std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config);

struct SweepRow {
    SweepPoint point;
    bool skipped = false;   // inadmissible load, flagged and not run
    bool failed = false;
    std::string message;    // skip/failure reason
    RunMetrics metrics;
    std::string verdict;
    std::int64_t wall_ms = 0;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    bool any_failed = false;
};

/// Executes every point with at most `jobs` worker threads. Row order always
/// matches expand_sweep regardless of scheduling.
SweepOutcome execute_sweep(const ExperimentConfig& config, int jobs);

extern const char* const kSweepCsvHeader;

std::string sweep_row_csv(const SweepRow& row);

}  // namespace optsched
