#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "optsched/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"optsched: end-to-end scheduling simulator for bufferless crossbar "
                 "networks with reconfiguration delay"};
    app.require_subcommand(1);

    optsched::cli::RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Execute a single simulation run");
    run->add_option("--config", run_args.config_path, "Experiment config file (JSON)");
    run->add_option("--preset", run_args.preset, "Named preset instead of --config");
    run->add_option("--presets-dir", run_args.presets_dir, "Preset search directory");
    run->add_option("--out", run_args.out_dir, "Output directory");
    run->add_flag("--trace", run_args.force_trace, "Force trace recording");

    optsched::cli::SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Run the cartesian sweep of a config");
    sweep->add_option("--config", sweep_args.config_path, "Experiment config file (JSON)");
    sweep->add_option("--preset", sweep_args.preset, "Named preset instead of --config");
    sweep->add_option("--presets-dir", sweep_args.presets_dir, "Preset search directory");
    sweep->add_option("--out", sweep_args.out_dir, "Output directory");
    sweep->add_option("--jobs", sweep_args.jobs, "Worker threads (default: all cores)");

    std::string matrix_path;
    std::optional<int> top_terms;
    std::string decompose_out;
    CLI::App* decompose =
        app.add_subcommand("decompose", "Scale a matrix and print its BvN decomposition");
    decompose->add_option("--input", matrix_path, "Square nonnegative CSV matrix")->required();
    decompose->add_option("--q", top_terms, "Keep only the Q largest terms");
    decompose->add_option("--out", decompose_out, "Write the decomposition CSV here");

    std::string match_path;
    CLI::App* match = app.add_subcommand("match", "Print the maximum weight assignment");
    match->add_option("--input", match_path, "Square nonnegative CSV matrix")->required();

    std::string presets_dir;
    CLI::App* presets = app.add_subcommand("presets", "Preset catalogue");
    CLI::App* presets_list = presets->add_subcommand("list", "List available presets");
    presets_list->add_option("--presets-dir", presets_dir, "Preset search directory");
    presets->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return optsched::cli::kExitConfigError;
    }

    if (run->parsed()) return optsched::cli::cmd_run(run_args);
    if (sweep->parsed()) return optsched::cli::cmd_sweep(sweep_args);
    if (decompose->parsed())
        return optsched::cli::cmd_decompose(matrix_path, top_terms, decompose_out);
    if (match->parsed()) return optsched::cli::cmd_match(match_path);
    if (presets->parsed() && presets_list->parsed())
        return optsched::cli::cmd_presets_list(presets_dir);

    std::cerr << "no subcommand given\n";
    return optsched::cli::kExitConfigError;
}
