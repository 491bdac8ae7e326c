#include "doctest.h"

#include <cmath>

#include "optsched/engine.hpp"

using namespace optsched;

namespace {

RateMatrix zero_rates(int n) { return RateMatrix(n); }

}  // namespace

TEST_CASE("an idle network stays empty and never reconfigures") {
    SimParams params;
    params.n = 3;
    params.horizon = 100;
    const RunResult result = run(params, PolicySpec::max_weight(), zero_rates(3));
    CHECK(result.metrics.mean_total_queue == 0.0);
    CHECK(result.reconfig_slots.empty());
    CHECK(result.blanked_slots == 0);
    CHECK(result.metrics.duty_cycle == 1.0);
}

TEST_CASE("a reconfiguration blanks delta_r + 1 slots before the new schedule serves") {
    SimParams params;
    params.n = 2;
    params.delta_r = 3;
    params.horizon = 12;
    QueueMatrix initial(2);
    initial.set(0, 1, 5);
    RunOptions options;
    options.initial_queues = initial;
    options.record_queue_series = true;

    const RunResult result = run(params, PolicySpec::ffmw(10), zero_rates(2), options);

    REQUIRE(result.reconfig_slots.size() == 1);
    CHECK(result.reconfig_slots[0] == 0);
    CHECK(result.blanked_slots == 4);  // slots 0..3 lose their departures
    const std::vector<std::int64_t> expected = {5, 5, 5, 5, 5, 4, 3, 2, 1, 0, 0, 0};
    CHECK(result.total_queue_series == expected);
}

TEST_CASE("blanked slots account for exactly (delta_r + 1) per reconfiguration") {
    SimParams params;
    params.n = 4;
    params.delta_r = 10;
    params.horizon = 10000;
    params.seed = 3;
    const PolicySpec amw =
        PolicySpec::adaptive(PolicySpec::max_weight(), HysteresisFn::power_law(0.1, 0.01));
    const RunResult result = run(params, amw, uniform_rates(4, 0.7));

    std::int64_t expected_blanked = 0;
    for (std::int64_t t : result.reconfig_slots)
        expected_blanked += std::min<std::int64_t>(params.delta_r + 1, params.horizon - t);
    CHECK(result.blanked_slots == expected_blanked);
    CHECK(result.arrivals_total - result.departures_total - result.drops_total ==
          result.final_total_queue - result.initial_total_queue);
}

TEST_CASE("identical seeds give byte-identical runs") {
    SimParams params;
    params.n = 4;
    params.delta_r = 7;
    params.horizon = 5000;
    params.seed = 42;
    params.trace = true;
    RunOptions options;
    options.record_queue_series = true;
    const PolicySpec amw =
        PolicySpec::adaptive(PolicySpec::max_weight(), HysteresisFn::power_law(0.1, 0.01));

    const RunResult a = run(params, amw, uniform_rates(4, 0.6), options);
    const RunResult b = run(params, amw, uniform_rates(4, 0.6), options);
    CHECK(a.total_queue_series == b.total_queue_series);
    CHECK(a.reconfig_slots == b.reconfig_slots);
    CHECK(a.metrics.mean_total_queue == b.metrics.mean_total_queue);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].t == b.trace[i].t);
        CHECK(a.trace[i].w_star == b.trace[i].w_star);
        CHECK(a.trace[i].w_active == b.trace[i].w_active);
    }
}

TEST_CASE("monitoring delay makes the policy act on stale queues") {
    RateMatrix rates(2);
    rates.at(0, 1) = 1.0;  // deterministic arrival every slot

    for (std::int64_t delta_m : {std::int64_t{0}, std::int64_t{4}}) {
        SimParams params;
        params.n = 2;
        params.delta_m = delta_m;
        params.horizon = 30;
        const RunResult result = run(params, PolicySpec::max_weight(), rates);
        REQUIRE_FALSE(result.reconfig_slots.empty());
        // The first packet lands at the end of slot 0 and becomes visible to
        // the policy delta_m slots after slot 1.
        CHECK(result.reconfig_slots[0] == 1 + delta_m);
    }
}

TEST_CASE("single queue behaves as the scalar recursion oracle") {
    SimParams params;
    params.n = 2;
    params.horizon = 200000;
    params.warmup = 10000;
    params.seed = 8;
    RateMatrix rates(2);
    rates.at(0, 1) = 0.4;

    const RunResult result = run(params, PolicySpec::max_weight(), rates);

    // Independent scalar recursion: q <- max(q-1, 0) + Bernoulli(0.4).
    Rng rng(1234);
    std::int64_t q = 0, sum = 0, slots = 0;
    for (std::int64_t t = 0; t < params.horizon; ++t) {
        if (t >= params.warmup) {
            sum += q;
            ++slots;
        }
        q = std::max<std::int64_t>(q - 1, 0) + (rng.bernoulli(0.4) ? 1 : 0);
    }
    const double oracle_mean = static_cast<double>(sum) / static_cast<double>(slots);
    CHECK(std::abs(result.metrics.mean_total_queue - oracle_mean) <
          0.03 * std::max(oracle_mean, 1e-9));
}

TEST_CASE("capacity clipping counts drops") {
    SimParams params;
    params.n = 2;
    params.horizon = 1000;
    params.queue_capacity = 3;
    params.seed = 5;
    RateMatrix rates(2);
    rates.at(0, 1) = 0.9;

    // FFMW with a frame longer than the horizon never leaves the idle
    // schedule (the first decision sees empty queues), so packets pile up.
    const RunResult result = run(params, PolicySpec::ffmw(10000), rates);
    CHECK(result.drops_total > 800);
    CHECK(result.final_total_queue <= 2 * 3);
    CHECK(result.metrics.drop_count == result.drops_total);
}

TEST_CASE("duty cycle") {
    SUBCASE("equal gaps") {
        std::vector<std::int64_t> log;
        for (int k = 0; k < 10; ++k) log.push_back(1670 * k);
        CHECK(duty_cycle(log, 167, 0, 100000) == doctest::Approx(0.9));
    }
    SUBCASE("mixed gaps average first") {
        const std::vector<std::int64_t> log = {100, 300, 700};
        CHECK(duty_cycle(log, 30, 0, 1000) == doctest::Approx(0.9));
    }
    SUBCASE("fewer than two reconfigurations") {
        CHECK(duty_cycle(std::vector<std::int64_t>{}, 167, 0, 1000) == 1.0);
        CHECK(duty_cycle(std::vector<std::int64_t>{5}, 167, 0, 1000) == 1.0);
    }
    SUBCASE("window filtering") {
        const std::vector<std::int64_t> log = {5, 100, 300, 700, 2000};
        CHECK(duty_cycle(log, 30, 90, 1000) == doctest::Approx(0.9));
    }
}

TEST_CASE("lemma 1 checker") {
    const HysteresisFn g = HysteresisFn::power_law(0.1, 0.01);

    SUBCASE("empty trace") {
        const Lemma1Report report = lemma1_check({}, g, 0.0, 4, 1, 50);
        CHECK(report.violations.empty());
        CHECK(report.hypotheses_hold);
    }
    SUBCASE("synthetic violation") {
        const double bound = dwell_bound(g, 0.0, 4, 1, 50);
        std::vector<TraceEvent> trace = {
            {100, TraceKind::reconfig_start, bound + 10.0, 0.0, 0},
            {120, TraceKind::reconfig_start, bound + 12.0, 0.0, 0},
        };
        const Lemma1Report report = lemma1_check(trace, g, 0.0, 4, 1, 50);
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].reconfig_at == 100);
        CHECK(report.violations[0].next_reconfig == 120);
    }
    SUBCASE("below the bound nothing is checked") {
        const double bound = dwell_bound(g, 0.0, 4, 1, 50);
        std::vector<TraceEvent> trace = {
            {100, TraceKind::reconfig_start, bound - 1.0, 0.0, 0},
            {120, TraceKind::reconfig_start, bound - 1.0, 0.0, 0},
        };
        CHECK(lemma1_check(trace, g, 0.0, 4, 1, 50).violations.empty());
    }
    SUBCASE("linear g is flagged as outside the hypotheses") {
        const HysteresisFn linear = HysteresisFn::power_law(0.1, 0.0);
        CHECK_FALSE(lemma1_check({}, linear, 0.0, 4, 1, 50).hypotheses_hold);
    }
    SUBCASE("an adaptive max weight run has no violations") {
        SimParams params;
        params.n = 4;
        params.delta_r = 10;
        params.horizon = 50000;
        params.seed = 21;
        params.trace = true;
        const PolicySpec amw = PolicySpec::adaptive(PolicySpec::max_weight(), g);
        const RunResult result = run(params, amw, uniform_rates(4, 0.7));
        const Lemma1Report report = lemma1_check(result.trace, g, 0.0, 4, 1, 50);
        CHECK(report.hypotheses_hold);
        CHECK(report.violations.empty());
    }
}

TEST_CASE("parameter validation") {
    SimParams params;
    params.n = 1;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.n = 2;
    params.warmup = 1000;
    params.horizon = 1000;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params.warmup = 0;
    params.delta_r = -1;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
