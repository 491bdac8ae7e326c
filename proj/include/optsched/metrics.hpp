#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace optsched {

struct SimParams;
struct TraceEvent;

/// Post-warmup statistics of one run. mean_queue_length is the paper's
/// figure-of-merit: mean total queue divided by the n(n-1) edge queues.
struct RunMetrics {
    int n = 0;
    double mean_queue_length = 0.0;
    double mean_total_queue = 0.0;
    double duty_cycle = 1.0;
    std::int64_t reconfig_count = 0;
    std::int64_t drop_count = 0;
    // Means of the total queue over [warmup, horizon/2) and [horizon/2, horizon).
    double first_half_mean = 0.0;
    double second_half_mean = 0.0;
    double duration_mean = 0.0;
    double duration_median = 0.0;
    double duration_p95 = 0.0;
    double effective_load = 0.0;
    // Decimated (t, total_queue) samples, at most 10000 per run.
    std::vector<std::pair<std::int64_t, std::int64_t>> series;
};

enum class StabilityVerdict { stable, suspect, unstable };

const char* to_string(StabilityVerdict verdict);

/// Finite-horizon stability proxy: stable when the second-half mean stays
/// within 1.2x of the first half, unstable at 3x or more, suspect between.
StabilityVerdict stability_verdict(const RunMetrics& metrics);

/// Streaming accumulator with O(1) memory apart from the bounded series and
/// the reconfiguration gap list.
class MetricsAccumulator {
public:
    MetricsAccumulator(const SimParams& params, double effective_load);

    /// Called once per slot with the total queue at the start of the slot.
    void on_slot(std::int64_t t, std::int64_t total_queue);
    void on_drops(std::int64_t dropped) { drop_count_ += dropped; }

    RunMetrics finish(std::span<const std::int64_t> reconfig_slots,
                      std::int64_t delta_r) const;

private:
    int n_;
    std::int64_t warmup_;
    std::int64_t horizon_;
    std::int64_t half_boundary_;
    std::int64_t stride_;
    double effective_load_;
    std::int64_t sum_total_ = 0;
    std::int64_t slots_seen_ = 0;
    std::int64_t first_sum_ = 0, first_count_ = 0;
    std::int64_t second_sum_ = 0, second_count_ = 0;
    std::int64_t drop_count_ = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> series_;
};

/// Trace-based summary; requires one decision event per slot (true whenever
/// the run has delta_r = 0), so it can reconstruct the per-slot totals the
/// streaming path accumulated.
RunMetrics summarize(std::span<const TraceEvent> trace, const SimParams& params,
                     double effective_load, std::int64_t delta_r);

}  // namespace optsched
