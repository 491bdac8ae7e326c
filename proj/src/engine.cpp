#include "optsched/engine.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "optsched/matching.hpp"

namespace optsched {

void SimParams::validate() const {
    if (n < 2) throw std::invalid_argument("SimParams: need at least two ports");
    if (delta_r < 0) throw std::invalid_argument("SimParams: delta_r must be nonnegative");
    if (delta_m < 0) throw std::invalid_argument("SimParams: delta_m must be nonnegative");
    if (horizon < 1) throw std::invalid_argument("SimParams: horizon must be positive");
    if (warmup < 0 || warmup >= horizon)
        throw std::invalid_argument("SimParams: warmup must lie in [0, horizon)");
    if (queue_capacity && *queue_capacity < 0)
        throw std::invalid_argument("SimParams: queue capacity must be nonnegative");
}

const char* to_string(TraceKind kind) {
    switch (kind) {
        case TraceKind::decision: return "decision";
        case TraceKind::reconfig_start: return "reconfig_start";
        case TraceKind::reconfig_end: return "reconfig_end";
    }
    return "?";
}

namespace {

double max_weight_value(const QueueMatrix& queues) {
    return max_weight_assignment(WeightGrid::from_queues(queues)).total;
}

}  // namespace

RunResult run(const SimParams& params, const PolicySpec& policy, const RateMatrix& rates,
              const RunOptions& options) {
    params.validate();
    policy.validate();
    if (rates.n != params.n)
        throw std::invalid_argument("run: rate matrix dimension differs from params.n");
    rates.validate();

    const int n = params.n;
    Rng arrival_rng(params.seed);
    Rng policy_rng(split_seed(params.seed));

    QueueMatrix queues(n);
    if (options.initial_queues) {
        if (options.initial_queues->size() != n)
            throw std::invalid_argument("run: initial queue matrix dimension mismatch");
        queues = *options.initial_queues;
    }

    Schedule active = Schedule::identity(n);
    PolicyState state = make_policy_state(policy, n, params.delta_r);

    std::deque<QueueMatrix> snapshots;  // only used when delta_m > 0
    std::int64_t reconfig_remaining = 0;
    std::optional<Schedule> pending;

    MetricsAccumulator accumulator(params, load(rates));
    RunResult result;
    result.initial_total_queue = queues.total();
    if (options.record_queue_series)
        result.total_queue_series.reserve(static_cast<size_t>(params.horizon));

    std::int64_t total_q = result.initial_total_queue;
    std::vector<std::int64_t> arrivals(static_cast<size_t>(n) * n);

    // Guard against counter overflow on absurd configurations: with A_max = 1
    // the total queue is bounded by n^2 * horizon plus the initial backlog.
    const std::int64_t overflow_guard =
        std::numeric_limits<std::int64_t>::max() / (static_cast<std::int64_t>(n) * n + 1) - 1;

    for (std::int64_t t = 0; t < params.horizon; ++t) {
        accumulator.on_slot(t, total_q);
        if (options.record_queue_series) result.total_queue_series.push_back(total_q);

        // (1) observation: snapshot from delta_m slots ago, clamped at t = 0
        const QueueMatrix* observed = &queues;
        if (params.delta_m > 0) {
            snapshots.push_back(queues);
            if (static_cast<std::int64_t>(snapshots.size()) > params.delta_m + 1)
                snapshots.pop_front();
            observed = &snapshots.front();
        }

        // (2) decision, suppressed while a reconfiguration is in progress
        if (reconfig_remaining == 0) {
            Observation obs{*observed, active, t, false};
            Decision decision = decide(policy, state, obs, policy_rng);
            if (params.trace) {
                const double w_star = max_weight_value(queues);
                const double w_active = weight(queues, decision.schedule);
                result.trace.push_back({t, TraceKind::decision, w_star, w_active, total_q});
                if (decision.changed)
                    result.trace.push_back(
                        {t, TraceKind::reconfig_start, w_star, w_active, total_q});
            }
            if (decision.changed) {
                result.reconfig_slots.push_back(t);
                pending = std::move(decision.schedule);
                reconfig_remaining = params.delta_r + 1;
            } else {
                active = std::move(decision.schedule);
            }
        }

        // (3) departures: blanked while reconfiguring, at most one per queue
        std::int64_t departed = 0;
        if (reconfig_remaining > 0) {
            ++result.blanked_slots;
            --reconfig_remaining;
            if (reconfig_remaining == 0) {
                active = std::move(*pending);
                pending.reset();
                if (params.trace)
                    result.trace.push_back({t, TraceKind::reconfig_end,
                                            max_weight_value(queues),
                                            weight(queues, active), total_q});
            }
        } else {
            for (int src = 0; src < n; ++src) {
                const int dst = active.dst_of(src);
                if (dst >= 0 && dst != src && queues.at(src, dst) > 0) {
                    queues.add(src, dst, -1);
                    ++departed;
                }
            }
        }
        result.departures_total += departed;
        total_q -= departed;

        // (4) arrivals, clipped at the queue capacity with drops counted
        sample_arrivals_into(rates, arrival_rng, arrivals);
        for (int src = 0; src < n; ++src) {
            for (int dst = 0; dst < n; ++dst) {
                if (src == dst) continue;
                const std::int64_t a = arrivals[static_cast<size_t>(src) * n + dst];
                if (a == 0) continue;
                result.arrivals_total += a;
                std::int64_t level = queues.at(src, dst) + a;
                if (params.queue_capacity && level > *params.queue_capacity) {
                    const std::int64_t dropped = level - *params.queue_capacity;
                    result.drops_total += dropped;
                    if (t >= params.warmup) accumulator.on_drops(dropped);
                    level = *params.queue_capacity;
                }
                total_q += level - queues.at(src, dst);
                queues.set(src, dst, level);
            }
        }

        if (total_q > overflow_guard) {
            std::ostringstream out;
            out << "run: total queue " << total_q << " at slot " << t
                << " is about to overflow the accumulators";
            throw std::overflow_error(out.str());
        }
    }

    result.final_total_queue = queues.total();
    if (result.final_total_queue !=
        result.initial_total_queue + result.arrivals_total - result.departures_total -
            result.drops_total)
        throw std::logic_error("run: flow conservation violated (internal bug)");

    result.tms_fallbacks = state.tms_fallbacks;
    result.metrics = accumulator.finish(result.reconfig_slots, params.delta_r);
    return result;
}

double duty_cycle(std::span<const std::int64_t> reconfig_slots, std::int64_t delta_r,
                  std::int64_t window_begin, std::int64_t window_end) {
    std::vector<std::int64_t> inside;
    for (std::int64_t t : reconfig_slots)
        if (t >= window_begin && t < window_end) inside.push_back(t);
    if (inside.size() < 2) return 1.0;
    double gap_sum = 0.0;
    for (size_t k = 1; k < inside.size(); ++k)
        gap_sum += static_cast<double>(inside[k] - inside[k - 1]);
    const double mean_gap = gap_sum / static_cast<double>(inside.size() - 1);
    return 1.0 - static_cast<double>(delta_r) / mean_gap;
}

Lemma1Report lemma1_check(std::span<const TraceEvent> trace, const HysteresisFn& g,
                          double big_g, int n, int a_max, std::int64_t t_prime) {
    Lemma1Report report;
    report.hypotheses_hold = g.sublinear();
    report.bound = dwell_bound(g, big_g, n, a_max, t_prime);

    std::vector<const TraceEvent*> reconfigs;
    for (const TraceEvent& event : trace)
        if (event.kind == TraceKind::reconfig_start) reconfigs.push_back(&event);

    for (size_t k = 0; k + 1 < reconfigs.size(); ++k) {
        if (reconfigs[k]->w_star <= report.bound) continue;
        const std::int64_t next = reconfigs[k + 1]->t;
        if (next > reconfigs[k]->t && next <= reconfigs[k]->t + t_prime)
            report.violations.push_back({reconfigs[k]->t, next, reconfigs[k]->w_star});
    }
    return report;
}

}  // namespace optsched
