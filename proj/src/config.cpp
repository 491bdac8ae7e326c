#include "optsched/config.hpp"

#include <fstream>
#include <sstream>

#include "optsched/csv.hpp"
#include "json.hpp"

namespace optsched {

using nlohmann::json;

RateMatrix TrafficSpec::build(int n) const {
    switch (kind) {
        case Kind::uniform:
            return uniform_rates(n, rho);
        case Kind::nonuniform: {
            Rng rng(traffic_seed);
            return nonuniform_rates(n, rho, m, rng);
        }
        case Kind::csv: {
            const auto rows = read_matrix_csv(path);
            if (static_cast<int>(rows.size()) != n)
                throw ConfigError("traffic csv matrix dimension differs from params.n");
            return RateMatrix::from_rows(rows);
        }
    }
    throw ConfigError("unknown traffic kind");
}

std::string TrafficSpec::label() const {
    switch (kind) {
        case Kind::uniform: return "uniform";
        case Kind::nonuniform: return "nonuniform";
        case Kind::csv: return "csv";
    }
    return "?";
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config field '" + where + "': " + what);
}

json require(const json& node, const std::string& key, const std::string& where) {
    if (!node.is_object() || !node.contains(key)) fail(where + "." + key, "missing");
    return node.at(key);
}

WeightFn weight_fn_from(double alpha) {
    return alpha == 1.0 ? WeightFn::identity() : WeightFn::power(alpha);
}

PolicySpec policy_from_json(const json& node, const std::string& where, bool allow_adaptive) {
    const std::string kind = require(node, "kind", where).get<std::string>();
    try {
        if (kind == "max_weight")
            return PolicySpec::max_weight(weight_fn_from(node.value("alpha", 1.0)));
        if (kind == "adaptive") {
            if (!allow_adaptive) fail(where, "adaptive wrapper cannot nest");
            HysteresisFn g = HysteresisFn::power_law(
                require(node, "gamma", where).get<double>(),
                require(node, "delta", where).get<double>());
            PolicySpec base =
                policy_from_json(require(node, "base", where), where + ".base", false);
            return PolicySpec::adaptive(std::move(base), g,
                                        weight_fn_from(node.value("alpha", 1.0)));
        }
        if (kind == "pipelined_max_weight")
            return PolicySpec::pipelined_max_weight(require(node, "k", where).get<int>());
        if (kind == "tassiulas_random") return PolicySpec::tassiulas_random();
        if (kind == "hamiltonian") return PolicySpec::hamiltonian();
        if (kind == "max_size") return PolicySpec::max_size();
        if (kind == "ffmw")
            return PolicySpec::ffmw(require(node, "t", where).get<std::int64_t>());
        if (kind == "vfmw")
            return PolicySpec::vfmw(node.value("c", 1.0), node.value("beta", 0.5));
        if (kind == "tms")
            return PolicySpec::tms(require(node, "w", where).get<std::int64_t>(),
                                   require(node, "q", where).get<int>());
    } catch (const std::invalid_argument& err) {
        fail(where, err.what());
    }
    fail(where + ".kind", "unknown policy kind '" + kind + "'");
}

json policy_to_json(const PolicySpec& spec) {
    json node;
    switch (spec.kind) {
        case PolicyKind::max_weight:
            node["kind"] = "max_weight";
            node["alpha"] = spec.f.kind == WeightFn::Kind::power ? spec.f.alpha : 1.0;
            break;
        case PolicyKind::adaptive:
            node["kind"] = "adaptive";
            node["gamma"] = spec.g.gamma;
            node["delta"] = spec.g.delta;
            node["alpha"] = spec.f.kind == WeightFn::Kind::power ? spec.f.alpha : 1.0;
            node["base"] = policy_to_json(*spec.base);
            break;
        case PolicyKind::pipelined_max_weight:
            node["kind"] = "pipelined_max_weight";
            node["k"] = spec.pipeline_delay;
            break;
        case PolicyKind::tassiulas_random:
            node["kind"] = "tassiulas_random";
            break;
        case PolicyKind::hamiltonian:
            node["kind"] = "hamiltonian";
            break;
        case PolicyKind::max_size:
            node["kind"] = "max_size";
            break;
        case PolicyKind::ffmw:
            node["kind"] = "ffmw";
            node["t"] = spec.frame_length;
            break;
        case PolicyKind::vfmw:
            node["kind"] = "vfmw";
            node["c"] = spec.vfmw_scale;
            node["beta"] = spec.vfmw_exponent;
            break;
        case PolicyKind::tms:
            node["kind"] = "tms";
            node["w"] = spec.tms_window;
            node["q"] = spec.tms_max_terms;
            break;
    }
    return node;
}

TrafficSpec traffic_from_json(const json& node) {
    TrafficSpec traffic;
    const std::string kind = require(node, "kind", "traffic").get<std::string>();
    if (kind == "uniform") {
        traffic.kind = TrafficSpec::Kind::uniform;
        traffic.rho = require(node, "rho", "traffic").get<double>();
        if (!(traffic.rho > 0.0 && traffic.rho < 1.0))
            fail("traffic.rho", "must lie in (0,1)");
    } else if (kind == "nonuniform") {
        traffic.kind = TrafficSpec::Kind::nonuniform;
        traffic.rho = require(node, "rho", "traffic").get<double>();
        if (!(traffic.rho > 0.0 && traffic.rho < 1.0))
            fail("traffic.rho", "must lie in (0,1)");
        traffic.m = node.value("m", 100);
        if (traffic.m < 1) fail("traffic.m", "must be at least 1");
        traffic.traffic_seed = node.value("traffic_seed", std::uint64_t{1});
    } else if (kind == "csv") {
        traffic.kind = TrafficSpec::Kind::csv;
        traffic.path = require(node, "path", "traffic").get<std::string>();
    } else {
        fail("traffic.kind", "unknown traffic kind '" + kind + "'");
    }
    return traffic;
}

json traffic_to_json(const TrafficSpec& traffic) {
    json node;
    node["kind"] = traffic.label();
    switch (traffic.kind) {
        case TrafficSpec::Kind::uniform:
            node["rho"] = traffic.rho;
            break;
        case TrafficSpec::Kind::nonuniform:
            node["rho"] = traffic.rho;
            node["m"] = traffic.m;
            node["traffic_seed"] = traffic.traffic_seed;
            break;
        case TrafficSpec::Kind::csv:
            node["path"] = traffic.path;
            break;
    }
    return node;
}

SimParams params_from_json(const json& node) {
    SimParams params;
    params.n = require(node, "n", "params").get<int>();
    params.delta_r = node.value("delta_r", std::int64_t{0});
    params.delta_m = node.value("delta_m", std::int64_t{0});
    params.horizon = require(node, "horizon", "params").get<std::int64_t>();
    params.warmup = node.value("warmup", std::int64_t{0});
    if (node.contains("queue_capacity") && !node.at("queue_capacity").is_null())
        params.queue_capacity = node.at("queue_capacity").get<std::int64_t>();
    params.seed = node.value("seed", std::uint64_t{1});
    params.trace = node.value("trace", false);
    try {
        params.validate();
    } catch (const std::invalid_argument& err) {
        fail("params", err.what());
    }
    return params;
}

json params_to_json(const SimParams& params) {
    json node;
    node["n"] = params.n;
    node["delta_r"] = params.delta_r;
    node["delta_m"] = params.delta_m;
    node["horizon"] = params.horizon;
    node["warmup"] = params.warmup;
    if (params.queue_capacity)
        node["queue_capacity"] = *params.queue_capacity;
    else
        node["queue_capacity"] = nullptr;
    node["seed"] = params.seed;
    node["trace"] = params.trace;
    return node;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("invalid JSON: ") + err.what());
    }

    ExperimentConfig config;
    config.params = params_from_json(require(root, "params", ""));
    config.policy = policy_from_json(require(root, "policy", ""), "policy", true);
    config.traffic = traffic_from_json(require(root, "traffic", ""));
    if (root.contains("seeds")) {
        config.seeds = root.at("seeds").get<std::vector<std::uint64_t>>();
        if (config.seeds.empty()) fail("seeds", "must not be empty");
    }
    if (root.contains("sweep")) {
        const json& axes = root.at("sweep");
        config.sweep.rho = axes.value("rho", std::vector<double>{});
        config.sweep.delta_r = axes.value("delta_r", std::vector<std::int64_t>{});
        config.sweep.delta = axes.value("delta", std::vector<double>{});
        config.sweep.gamma = axes.value("gamma", std::vector<double>{});
        config.sweep.frame_t = axes.value("t", std::vector<std::int64_t>{});
        config.sweep.window_w = axes.value("w", std::vector<std::int64_t>{});
        if (axes.contains("policy")) {
            int index = 0;
            for (const json& node : axes.at("policy")) {
                config.sweep.policies.push_back(policy_from_json(
                    node, "sweep.policy[" + std::to_string(index) + "]", true));
                ++index;
            }
        }
    }
    config.output = root.value("output", std::string{});
    config.description = root.value("description", std::string{});
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
    json root;
    root["params"] = params_to_json(config.params);
    root["policy"] = policy_to_json(config.policy);
    root["traffic"] = traffic_to_json(config.traffic);
    root["seeds"] = config.seeds;
    if (!config.sweep.empty()) {
        json axes;
        if (!config.sweep.rho.empty()) axes["rho"] = config.sweep.rho;
        if (!config.sweep.delta_r.empty()) axes["delta_r"] = config.sweep.delta_r;
        if (!config.sweep.delta.empty()) axes["delta"] = config.sweep.delta;
        if (!config.sweep.gamma.empty()) axes["gamma"] = config.sweep.gamma;
        if (!config.sweep.frame_t.empty()) axes["t"] = config.sweep.frame_t;
        if (!config.sweep.window_w.empty()) axes["w"] = config.sweep.window_w;
        if (!config.sweep.policies.empty()) {
            json list = json::array();
            for (const PolicySpec& spec : config.sweep.policies)
                list.push_back(policy_to_json(spec));
            axes["policy"] = list;
        }
        root["sweep"] = axes;
    }
    if (!config.output.empty()) root["output"] = config.output;
    if (!config.description.empty()) root["description"] = config.description;
    return root.dump(2) + "\n";
}

}  // namespace optsched
