#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "optsched/engine.hpp"
#include "optsched/policies.hpp"
#include "optsched/traffic.hpp"

namespace optsched {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Traffic scenario description. `nonuniform` draws its permutation set from
/// traffic_seed, so every sweep point over the same (n, m, traffic_seed)
/// shares the same demand structure scaled by rho.
struct TrafficSpec {
    enum class Kind { uniform, nonuniform, csv };

    Kind kind = Kind::uniform;
    double rho = 0.5;
    int m = 100;
    std::uint64_t traffic_seed = 1;
    std::string path;

    RateMatrix build(int n) const;
    std::string label() const;

    bool operator==(const TrafficSpec&) const = default;
};

struct SweepAxes {
    std::vector<double> rho;
    std::vector<std::int64_t> delta_r;
    std::vector<double> delta;
    std::vector<double> gamma;
    std::vector<std::int64_t> frame_t;
    std::vector<std::int64_t> window_w;
    std::vector<PolicySpec> policies;

    bool empty() const {
        return rho.empty() && delta_r.empty() && delta.empty() && gamma.empty() &&
               frame_t.empty() && window_w.empty() && policies.empty();
    }

    bool operator==(const SweepAxes&) const = default;
};

struct ExperimentConfig {
    SimParams params;
    PolicySpec policy;
    TrafficSpec traffic;
    std::vector<std::uint64_t> seeds{1};
    SweepAxes sweep;
    std::string output;
    std::string description;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

}  // namespace optsched
