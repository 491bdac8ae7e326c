#include "optsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "optsched/engine.hpp"

namespace optsched {

const char* to_string(StabilityVerdict verdict) {
    switch (verdict) {
        case StabilityVerdict::stable: return "stable";
        case StabilityVerdict::suspect: return "suspect";
        case StabilityVerdict::unstable: return "unstable";
    }
    return "?";
}

StabilityVerdict stability_verdict(const RunMetrics& metrics) {
    if (metrics.second_half_mean <= 1.2 * metrics.first_half_mean)
        return StabilityVerdict::stable;
    if (metrics.second_half_mean >= 3.0 * metrics.first_half_mean)
        return StabilityVerdict::unstable;
    return StabilityVerdict::suspect;
}

MetricsAccumulator::MetricsAccumulator(const SimParams& params, double effective_load)
    : n_(params.n),
      warmup_(params.warmup),
      horizon_(params.horizon),
      half_boundary_(std::max(params.warmup, params.horizon / 2)),
      effective_load_(effective_load) {
    const std::int64_t window = horizon_ - warmup_;
    stride_ = std::max<std::int64_t>(1, (window + 9999) / 10000);
}

void MetricsAccumulator::on_slot(std::int64_t t, std::int64_t total_queue) {
    if (t < warmup_) return;
    sum_total_ += total_queue;
    ++slots_seen_;
    if (t < half_boundary_) {
        first_sum_ += total_queue;
        ++first_count_;
    } else {
        second_sum_ += total_queue;
        ++second_count_;
    }
    if ((t - warmup_) % stride_ == 0) series_.emplace_back(t, total_queue);
}

RunMetrics MetricsAccumulator::finish(std::span<const std::int64_t> reconfig_slots,
                                      std::int64_t delta_r) const {
    RunMetrics m;
    m.n = n_;
    m.effective_load = effective_load_;
    m.drop_count = drop_count_;
    if (slots_seen_ > 0)
        m.mean_total_queue = static_cast<double>(sum_total_) / static_cast<double>(slots_seen_);
    m.mean_queue_length =
        m.mean_total_queue / (static_cast<double>(n_) * (static_cast<double>(n_) - 1.0));
    if (first_count_ > 0)
        m.first_half_mean = static_cast<double>(first_sum_) / static_cast<double>(first_count_);
    if (second_count_ > 0)
        m.second_half_mean =
            static_cast<double>(second_sum_) / static_cast<double>(second_count_);
    m.series = series_;

    std::vector<std::int64_t> gaps;
    std::int64_t previous = -1;
    for (std::int64_t t : reconfig_slots) {
        if (t < warmup_ || t >= horizon_) continue;
        ++m.reconfig_count;
        if (previous >= 0) gaps.push_back(t - previous);
        previous = t;
    }
    m.duty_cycle = duty_cycle(reconfig_slots, delta_r, warmup_, horizon_);
    if (!gaps.empty()) {
        std::sort(gaps.begin(), gaps.end());
        double sum = 0.0;
        for (std::int64_t gap : gaps) sum += static_cast<double>(gap);
        m.duration_mean = sum / static_cast<double>(gaps.size());
        m.duration_median = static_cast<double>(gaps[gaps.size() / 2]);
        m.duration_p95 =
            static_cast<double>(gaps[std::min(gaps.size() - 1, (gaps.size() * 95) / 100)]);
    }
    return m;
}

RunMetrics summarize(std::span<const TraceEvent> trace, const SimParams& params,
                     double effective_load, std::int64_t delta_r) {
    MetricsAccumulator accumulator(params, effective_load);
    std::vector<std::int64_t> reconfig_slots;
    std::int64_t expected_t = 0;
    for (const TraceEvent& event : trace) {
        if (event.kind == TraceKind::reconfig_start) {
            reconfig_slots.push_back(event.t);
            continue;
        }
        if (event.kind != TraceKind::decision) continue;
        if (event.t != expected_t)
            throw std::invalid_argument(
                "summarize: trace must contain a decision event for every slot "
                "(run with delta_r = 0)");
        accumulator.on_slot(event.t, event.total_queue);
        ++expected_t;
    }
    if (expected_t != params.horizon)
        throw std::invalid_argument("summarize: trace does not cover the whole horizon");
    return accumulator.finish(reconfig_slots, delta_r);
}

}  // namespace optsched
