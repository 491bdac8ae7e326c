#pragma once

#include <optional>
#include <string>

namespace optsched::cli {

// Exit codes: 0 success, 1 config error, 2 runtime failure, 3 partial sweep
// failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntimeFailure = 2;
inline constexpr int kExitPartialSweepFailure = 3;

struct RunArgs {
    std::string config_path;   // one of config_path / preset must be set
    std::string preset;
    std::string presets_dir;
    std::string out_dir;       // overrides config.output; default "."
    bool force_trace = false;
};

int cmd_run(const RunArgs& args);

struct SweepArgs {
    std::string config_path;
    std::string preset;
    std::string presets_dir;
    std::string out_dir;
    int jobs = 0;  // 0 = hardware concurrency
};

int cmd_sweep(const SweepArgs& args);

int cmd_decompose(const std::string& matrix_csv, std::optional<int> q,
                  const std::string& out_path);

int cmd_match(const std::string& matrix_csv);

int cmd_presets_list(const std::string& presets_dir);

}  // namespace optsched::cli
