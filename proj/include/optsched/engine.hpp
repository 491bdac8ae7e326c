#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optsched/core.hpp"
#include "optsched/metrics.hpp"
#include "optsched/policies.hpp"
#include "optsched/traffic.hpp"

namespace optsched {

struct SimParams {
    int n = 2;
    std::int64_t delta_r = 0;   // reconfiguration delay (slots)
    std::int64_t delta_m = 0;   // monitoring delay (slots)
    std::int64_t horizon = 1000;
    std::int64_t warmup = 0;
    std::optional<std::int64_t> queue_capacity;  // per queue; empty = unlimited
    std::uint64_t seed = 1;
    bool trace = false;

    void validate() const;

    bool operator==(const SimParams&) const = default;
};

enum class TraceKind { decision, reconfig_start, reconfig_end };

const char* to_string(TraceKind kind);

/// One trace row: the true maximum weight, the weight of the schedule in
/// force after the decision, and the total queue at the start of the slot.
struct TraceEvent {
    std::int64_t t = 0;
    TraceKind kind = TraceKind::decision;
    double w_star = 0.0;
    double w_active = 0.0;
    std::int64_t total_queue = 0;
};

struct RunOptions {
    std::optional<QueueMatrix> initial_queues;
    bool record_queue_series = false;  // per-slot total queue, for analysis
};

struct RunResult {
    RunMetrics metrics;
    std::vector<TraceEvent> trace;              // when params.trace
    std::vector<std::int64_t> total_queue_series;  // when requested
    std::vector<std::int64_t> reconfig_slots;   // always
    std::int64_t blanked_slots = 0;
    std::int64_t arrivals_total = 0;
    std::int64_t departures_total = 0;
    std::int64_t drops_total = 0;
    std::int64_t final_total_queue = 0;
    std::int64_t initial_total_queue = 0;
    std::int64_t tms_fallbacks = 0;
};

/// Runs the slot loop: observe (with monitoring delay), decide (never during
/// a reconfiguration), blank departures for delta_r + 1 slots on a schedule
/// change, serve, add arrivals, accumulate metrics. Deterministic given the
/// seed: arrivals and policy randomness use two independent streams derived
/// from it.
RunResult run(const SimParams& params, const PolicySpec& policy, const RateMatrix& rates,
              const RunOptions& options = {});

/// Duty cycle 1 - delta_r / E{T} with E{T} the mean gap between consecutive
/// reconfigurations inside [window_begin, window_end); 1.0 when fewer than
/// two reconfigurations fall in the window.
double duty_cycle(std::span<const std::int64_t> reconfig_slots, std::int64_t delta_r,
                  std::int64_t window_begin, std::int64_t window_end);

struct Lemma1Violation {
    std::int64_t reconfig_at = 0;
    std::int64_t next_reconfig = 0;
    double w_star = 0.0;
};

struct Lemma1Report {
    bool hypotheses_hold = true;  // false when g is not sublinear (delta == 0)
    double bound = 0.0;           // the dwell level M
    std::vector<Lemma1Violation> violations;
};

/// Checks the dwell-time property on a recorded trace: a reconfiguration at
/// a slot where the maximum weight exceeds M must be followed by at least
/// t_prime reconfiguration-free slots.
Lemma1Report lemma1_check(std::span<const TraceEvent> trace, const HysteresisFn& g,
                          double big_g, int n, int a_max, std::int64_t t_prime);

}  // namespace optsched
