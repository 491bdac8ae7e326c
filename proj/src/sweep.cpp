#include "optsched/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "optsched/csv.hpp"

namespace optsched {

namespace {

PolicySpec with_overrides(const PolicySpec& base, std::optional<double> delta,
                          std::optional<double> gamma, std::optional<std::int64_t> frame_t,
                          std::optional<std::int64_t> window_w) {
    PolicySpec spec = base;
    if (spec.kind == PolicyKind::adaptive && (delta || gamma)) {
        HysteresisFn g = spec.g;
        if (delta) g.delta = *delta;
        if (gamma) g.gamma = *gamma;
        spec.g = HysteresisFn::power_law(g.gamma, g.delta);
    }
    if (spec.kind == PolicyKind::ffmw && frame_t) spec.frame_length = *frame_t;
    if (spec.kind == PolicyKind::tms && window_w) spec.tms_window = *window_w;
    spec.validate();
    return spec;
}

template <typename T>
std::vector<std::optional<T>> axis_or_single(const std::vector<T>& values) {
    if (values.empty()) return {std::nullopt};
    std::vector<std::optional<T>> axis;
    for (const T& v : values) axis.push_back(v);
    return axis;
}

}  // namespace

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config) {
    if (config.sweep.empty())
        throw ConfigError("sweep: at least one sweep axis is required");
    if (!config.sweep.rho.empty() && config.traffic.kind == TrafficSpec::Kind::csv)
        throw ConfigError("sweep: a rho axis cannot be applied to csv traffic");

    const std::vector<PolicySpec> policy_axis =
        config.sweep.policies.empty() ? std::vector<PolicySpec>{config.policy}
                                      : config.sweep.policies;
    const auto rho_axis = axis_or_single(config.sweep.rho);
    const auto delta_r_axis = axis_or_single(config.sweep.delta_r);
    const auto delta_axis = axis_or_single(config.sweep.delta);
    const auto gamma_axis = axis_or_single(config.sweep.gamma);
    const auto t_axis = axis_or_single(config.sweep.frame_t);
    const auto w_axis = axis_or_single(config.sweep.window_w);

    std::vector<SweepPoint> points;
    for (const PolicySpec& policy : policy_axis)
        for (const auto& rho : rho_axis)
            for (const auto& delta_r : delta_r_axis)
                for (const auto& delta : delta_axis)
                    for (const auto& gamma : gamma_axis)
                        for (const auto& frame_t : t_axis)
                            for (const auto& window_w : w_axis)
                                for (std::uint64_t seed : config.seeds) {
                                    SweepPoint point;
                                    point.params = config.params;
                                    point.params.seed = seed;
                                    if (delta_r) point.params.delta_r = *delta_r;
                                    point.traffic = config.traffic;
                                    if (rho) point.traffic.rho = *rho;
                                    point.policy =
                                        with_overrides(policy, delta, gamma, frame_t, window_w);
                                    point.rho = point.traffic.kind == TrafficSpec::Kind::csv
                                                    ? 0.0
                                                    : point.traffic.rho;
                                    if (point.policy.kind == PolicyKind::adaptive) {
                                        point.delta = point.policy.g.delta;
                                        point.gamma = point.policy.g.gamma;
                                    }
                                    if (point.policy.kind == PolicyKind::ffmw)
                                        point.frame_t = point.policy.frame_length;
                                    if (point.policy.kind == PolicyKind::tms)
                                        point.window_w = point.policy.tms_window;
                                    points.push_back(std::move(point));
                                }
    return points;
}

SweepOutcome execute_sweep(const ExperimentConfig& config, int jobs) {
    const std::vector<SweepPoint> points = expand_sweep(config);
    SweepOutcome outcome;
    outcome.rows.resize(points.size());
    for (size_t i = 0; i < points.size(); ++i) outcome.rows[i].point = points[i];

    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    std::atomic<size_t> next{0};
    std::atomic<bool> any_failed{false};

    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            SweepRow& row = outcome.rows[i];
            try {
                const RateMatrix rates = row.point.traffic.build(row.point.params.n);
                const double rho = load(rates);
                if (row.point.traffic.kind == TrafficSpec::Kind::csv) row.point.rho = rho;
                if (rho >= 1.0) {
                    row.skipped = true;
                    row.message = "inadmissible: load(lambda) = " + format_double(rho);
                    continue;
                }
                const auto start = std::chrono::steady_clock::now();
                const RunResult result = run(row.point.params, row.point.policy, rates);
                const auto stop = std::chrono::steady_clock::now();
                row.wall_ms =
                    std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
                row.metrics = result.metrics;
                row.verdict = to_string(stability_verdict(result.metrics));
            } catch (const std::exception& err) {
                row.failed = true;
                row.message = err.what();
                any_failed = true;
            }
        }
    };

    std::vector<std::thread> threads;
    for (int k = 0; k < jobs; ++k) threads.emplace_back(worker);
    for (std::thread& thread : threads) thread.join();

    outcome.any_failed = any_failed;
    return outcome;
}

const char* const kSweepCsvHeader =
    "policy,rho,delta_r,delta,gamma,T,W,seed,mean_queue_length,duty_cycle,"
    "reconfig_count,drop_count,verdict,wall_ms\n";

std::string sweep_row_csv(const SweepRow& row) {
    std::vector<std::string> fields;
    fields.push_back(row.point.policy.label());
    fields.push_back(format_double(row.point.rho));
    fields.push_back(std::to_string(row.point.params.delta_r));
    fields.push_back(row.point.delta ? format_double(*row.point.delta) : "");
    fields.push_back(row.point.gamma ? format_double(*row.point.gamma) : "");
    fields.push_back(row.point.frame_t ? std::to_string(*row.point.frame_t) : "");
    fields.push_back(row.point.window_w ? std::to_string(*row.point.window_w) : "");
    fields.push_back(std::to_string(row.point.params.seed));
    if (row.skipped || row.failed) {
        fields.push_back("");
        fields.push_back("");
        fields.push_back("");
        fields.push_back("");
        fields.push_back(row.skipped ? "inadmissible" : "failed");
        fields.push_back("0");
    } else {
        fields.push_back(format_double(row.metrics.mean_queue_length));
        fields.push_back(format_double(row.metrics.duty_cycle));
        fields.push_back(std::to_string(row.metrics.reconfig_count));
        fields.push_back(std::to_string(row.metrics.drop_count));
        fields.push_back(row.verdict);
        fields.push_back(std::to_string(row.wall_ms));
    }
    return join_csv_row(fields);
}

}  // namespace optsched
