#include "optsched/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include "optsched/bvn.hpp"
#include "optsched/config.hpp"
#include "optsched/csv.hpp"
#include "optsched/engine.hpp"
#include "optsched/matching.hpp"
#include "optsched/presets.hpp"
#include "optsched/sweep.hpp"

namespace optsched::cli {

namespace fs = std::filesystem;

namespace {

std::string resolve_config_path(const std::string& config_path, const std::string& preset,
                                const std::string& presets_dir) {
    if (!config_path.empty()) return config_path;
    if (!preset.empty()) return find_preset(preset, presets_directory(presets_dir));
    throw ConfigError("either --config or --preset is required");
}

void ensure_directory(const std::string& dir) {
    if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string run_metrics_csv(const ExperimentConfig& config, const RunMetrics& m,
                            double measured_load) {
    std::string text =
        "policy,traffic,rho,n,delta_r,delta_m,horizon,warmup,seed,"
        "mean_queue_length,mean_total_queue,duty_cycle,reconfig_count,drop_count,"
        "first_half_mean,second_half_mean,duration_mean,duration_median,duration_p95,"
        "effective_load,verdict\n";
    text += join_csv_row({
        config.policy.label(),
        config.traffic.label(),
        format_double(config.traffic.kind == TrafficSpec::Kind::csv ? measured_load
                                                                    : config.traffic.rho),
        std::to_string(config.params.n),
        std::to_string(config.params.delta_r),
        std::to_string(config.params.delta_m),
        std::to_string(config.params.horizon),
        std::to_string(config.params.warmup),
        std::to_string(config.params.seed),
        format_double(m.mean_queue_length),
        format_double(m.mean_total_queue),
        format_double(m.duty_cycle),
        std::to_string(m.reconfig_count),
        std::to_string(m.drop_count),
        format_double(m.first_half_mean),
        format_double(m.second_half_mean),
        format_double(m.duration_mean),
        format_double(m.duration_median),
        format_double(m.duration_p95),
        format_double(m.effective_load),
        to_string(stability_verdict(m)),
    });
    return text;
}

std::string trace_csv(const std::vector<TraceEvent>& trace) {
    std::string text = "t,event,W_star,W_active,total_queue\n";
    for (const TraceEvent& event : trace) {
        text += join_csv_row({
            std::to_string(event.t),
            to_string(event.kind),
            format_double(event.w_star),
            format_double(event.w_active),
            std::to_string(event.total_queue),
        });
    }
    return text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

int cmd_run(const RunArgs& args) {
    ExperimentConfig config;
    try {
        config = load_config(resolve_config_path(args.config_path, args.preset, args.presets_dir));
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    }
    if (args.force_trace) config.params.trace = true;
    const std::string out_dir =
        !args.out_dir.empty() ? args.out_dir : (!config.output.empty() ? config.output : ".");

    try {
        const RateMatrix rates = config.traffic.build(config.params.n);
        const double rho = load(rates);
        if (rho >= 1.0) {
            std::cerr << "inadmissible traffic: load(lambda) = " << format_double(rho)
                      << " >= 1\n";
            return kExitRuntimeFailure;
        }

        const RunResult result = run(config.params, config.policy, rates);

        ensure_directory(out_dir);
        const fs::path base(out_dir);
        write_file((base / "metrics.csv").string(),
                   run_metrics_csv(config, result.metrics, rho));
        if (config.params.trace)
            write_file((base / "trace.csv").string(), trace_csv(result.trace));

        std::cout << "policy=" << config.policy.label() << " traffic=" << config.traffic.label()
                  << " load=" << format_double(result.metrics.effective_load)
                  << " mean_queue_length=" << format_double(result.metrics.mean_queue_length)
                  << " duty_cycle=" << format_double(result.metrics.duty_cycle)
                  << " reconfigs=" << result.metrics.reconfig_count
                  << " drops=" << result.metrics.drop_count
                  << " verdict=" << to_string(stability_verdict(result.metrics)) << "\n";
        return kExitOk;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "run failed: " << err.what() << "\n";
        return kExitRuntimeFailure;
    }
}

int cmd_sweep(const SweepArgs& args) {
    ExperimentConfig config;
    try {
        config = load_config(resolve_config_path(args.config_path, args.preset, args.presets_dir));
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    }
    const std::string out_dir =
        !args.out_dir.empty() ? args.out_dir : (!config.output.empty() ? config.output : ".");

    try {
        const SweepOutcome outcome = execute_sweep(config, args.jobs);

        std::string csv = kSweepCsvHeader;
        for (const SweepRow& row : outcome.rows) {
            csv += sweep_row_csv(row);
            if (row.skipped || row.failed)
                std::cerr << (row.failed ? "failed: " : "skipped: ")
                          << row.point.policy.label() << " seed=" << row.point.params.seed
                          << ": " << row.message << "\n";
        }
        ensure_directory(out_dir);
        write_file((fs::path(out_dir) / "sweep.csv").string(), csv);

        std::cout << outcome.rows.size() << " rows written to "
                  << (fs::path(out_dir) / "sweep.csv").string() << "\n";
        return outcome.any_failed ? kExitPartialSweepFailure : kExitOk;
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "sweep failed: " << err.what() << "\n";
        return kExitRuntimeFailure;
    }
}

int cmd_decompose(const std::string& matrix_csv, std::optional<int> q,
                  const std::string& out_path) {
    try {
        std::vector<std::vector<double>> rows;
        try {
            rows = read_matrix_csv(matrix_csv);
        } catch (const std::exception& err) {
            throw ConfigError(err.what());
        }
        for (const auto& row : rows)
            for (double x : row)
                if (x < 0.0) throw ConfigError("matrix entries must be nonnegative");

        const WeightGrid grid = WeightGrid::from_rows(rows);
        StochasticMatrix scaled = StochasticMatrix::from_rows(rows);
        // Inputs that are already doubly stochastic are decomposed as-is;
        // anything else goes through the scaling step first.
        if (scaled.line_sum_residual() >= 1e-9) scaled = sinkhorn_scale(grid);
        std::cout << "line_sum_residual=" << format_double(scaled.line_sum_residual()) << "\n";

        BvnDecomposition decomposition = birkhoff_decompose(scaled);
        if (q) decomposition = top_q(decomposition, *q);
        std::cout << "terms=" << decomposition.terms.size() << " reconstruction_residual="
                  << format_double(decomposition.reconstruction_error(scaled)) << "\n";

        std::string csv;
        for (const BvnTerm& term : decomposition.terms) {
            std::vector<std::string> fields{format_double(term.alpha)};
            for (int src = 0; src < term.schedule.size(); ++src)
                fields.push_back(std::to_string(term.schedule.dst_of(src) + 1));
            csv += join_csv_row(fields);
        }
        if (!out_path.empty())
            write_file(out_path, "alpha,dst_of_port...\n" + csv);
        else
            std::cout << csv;
        return kExitOk;
    } catch (const ConfigError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "decompose failed: " << err.what() << "\n";
        return kExitRuntimeFailure;
    }
}

int cmd_match(const std::string& matrix_csv) {
    try {
        const auto rows = read_matrix_csv(matrix_csv);
        const Assignment assignment = max_weight_assignment(WeightGrid::from_rows(rows));
        for (int src = 0; src < assignment.schedule.size(); ++src) {
            if (src) std::cout << ' ';
            std::cout << assignment.schedule.dst_of(src) + 1;
        }
        std::cout << "\n" << format_double(assignment.total) << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return kExitConfigError;
    }
}

int cmd_presets_list(const std::string& presets_dir) {
    const std::string dir = presets_directory(presets_dir);
    const std::vector<PresetInfo> presets = list_presets(dir);
    if (presets.empty()) {
        std::cerr << "no presets found in '" << dir << "'\n";
        return kExitConfigError;
    }
    for (const PresetInfo& info : presets)
        std::cout << info.name << "\t" << info.description << "\t(" << info.path << ")\n";
    return kExitOk;
}

}  // namespace optsched::cli
