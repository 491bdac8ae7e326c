#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "optsched/bvn.hpp"
#include "optsched/config.hpp"
#include "optsched/engine.hpp"
#include "optsched/matching.hpp"
#include "optsched/policies.hpp"
#include "optsched/traffic.hpp"

namespace py = pybind11;
using namespace optsched;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows to_rows(const StochasticMatrix& m) {
    Rows rows(static_cast<size_t>(m.n), std::vector<double>(static_cast<size_t>(m.n)));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) rows[i][j] = m.at(i, j);
    return rows;
}

Rows to_rows(const RateMatrix& m) {
    Rows rows(static_cast<size_t>(m.n), std::vector<double>(static_cast<size_t>(m.n)));
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) rows[i][j] = m.at(i, j);
    return rows;
}

QueueMatrix queues_from(const std::vector<std::vector<std::int64_t>>& rows) {
    return QueueMatrix::from_rows(rows);
}

WeightFn weight_fn(double alpha) {
    return alpha == 1.0 ? WeightFn::identity() : WeightFn::power(alpha);
}

std::vector<int> schedule_to_list(const Schedule& s) { return s.destinations(); }

using PyTerms = std::vector<std::pair<double, std::vector<int>>>;

PyTerms terms_to_list(const BvnDecomposition& d) {
    PyTerms terms;
    for (const BvnTerm& term : d.terms)
        terms.emplace_back(term.alpha, schedule_to_list(term.schedule));
    return terms;
}

BvnDecomposition terms_from_list(const PyTerms& terms) {
    BvnDecomposition d;
    for (const auto& [alpha, perm] : terms)
        d.terms.push_back({alpha, Schedule::from_permutation(perm)});
    return d;
}

py::dict metrics_to_dict(const RunMetrics& m) {
    py::dict out;
    out["mean_queue_length"] = m.mean_queue_length;
    out["mean_total_queue"] = m.mean_total_queue;
    out["duty_cycle"] = m.duty_cycle;
    out["reconfig_count"] = m.reconfig_count;
    out["drop_count"] = m.drop_count;
    out["first_half_mean"] = m.first_half_mean;
    out["second_half_mean"] = m.second_half_mean;
    out["duration_mean"] = m.duration_mean;
    out["duration_median"] = m.duration_median;
    out["duration_p95"] = m.duration_p95;
    out["effective_load"] = m.effective_load;
    out["verdict"] = std::string(to_string(stability_verdict(m)));
    return out;
}

py::dict run_config_json(const std::string& config_json) {
    const ExperimentConfig config = parse_config(config_json);
    const RateMatrix rates = config.traffic.build(config.params.n);
    if (load(rates) >= 1.0)
        throw std::invalid_argument("inadmissible traffic: load(lambda) >= 1");
    const RunResult result = run(config.params, config.policy, rates);

    py::dict out = metrics_to_dict(result.metrics);
    out["reconfig_slots"] = result.reconfig_slots;
    out["blanked_slots"] = result.blanked_slots;
    out["drops_total"] = result.drops_total;
    if (config.params.trace) {
        py::list trace;
        for (const TraceEvent& event : result.trace) {
            py::dict row;
            row["t"] = event.t;
            row["event"] = std::string(to_string(event.kind));
            row["w_star"] = event.w_star;
            row["w_active"] = event.w_active;
            row["total_queue"] = event.total_queue;
            trace.append(row);
        }
        out["trace"] = trace;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crossbar scheduling under reconfiguration delay: weights, matchings, "
              "Birkhoff-von-Neumann decomposition and the slot-level simulator.";

    m.def(
        "weight",
        [](const std::vector<std::vector<std::int64_t>>& queues, const std::vector<int>& dst,
           double alpha) {
            return weight(queues_from(queues), Schedule::from_permutation(dst),
                          weight_fn(alpha));
        },
        py::arg("queues"), py::arg("schedule"), py::arg("alpha") = 1.0,
        "Schedule weight sum f(L_ij) over the schedule's edges; `schedule` maps "
        "each source to its destination (-1 leaves a source unmatched).");

    m.def(
        "total_queue",
        [](const std::vector<std::vector<std::int64_t>>& queues) {
            return total_queue(queues_from(queues));
        },
        py::arg("queues"));

    m.def(
        "eval_hysteresis",
        [](double gamma, double delta, double x) {
            return eval_hysteresis(HysteresisFn::power_law(gamma, delta), x);
        },
        py::arg("gamma"), py::arg("delta"), py::arg("x"),
        "g(x) = (1-gamma) * x^(1-delta)");

    m.def(
        "invert_hysteresis",
        [](double gamma, double delta, double y) {
            return invert_hysteresis(HysteresisFn::power_law(gamma, delta), y);
        },
        py::arg("gamma"), py::arg("delta"), py::arg("y"));

    m.def(
        "max_weight_assignment",
        [](const Rows& grid) {
            const Assignment a = max_weight_assignment(WeightGrid::from_rows(grid));
            return std::make_pair(schedule_to_list(a.schedule), a.total);
        },
        py::arg("weights"),
        "Exact maximum weight assignment; returns (dst_of_src, total).");

    m.def(
        "brute_force_assignment",
        [](const Rows& grid) {
            const Assignment a = brute_force_assignment(WeightGrid::from_rows(grid));
            return std::make_pair(schedule_to_list(a.schedule), a.total);
        },
        py::arg("weights"));

    m.def(
        "max_size_matching",
        [](const std::vector<std::vector<bool>>& mask) {
            BoolGrid grid(static_cast<int>(mask.size()));
            for (int i = 0; i < grid.n; ++i)
                for (int j = 0; j < grid.n; ++j) grid.set(i, j, mask[i][j]);
            return schedule_to_list(max_size_matching(grid));
        },
        py::arg("mask"));

    m.def(
        "complete_to_permutation",
        [](const std::vector<int>& partial) {
            return schedule_to_list(
                complete_to_permutation(Schedule::from_permutation(partial)));
        },
        py::arg("partial"));

    m.def(
        "sinkhorn_scale",
        [](const Rows& raw, double tol, int max_iter) {
            return to_rows(sinkhorn_scale(WeightGrid::from_rows(raw), tol, max_iter));
        },
        py::arg("matrix"), py::arg("tol") = 1e-12, py::arg("max_iter") = 10000);

    m.def(
        "birkhoff_decompose",
        [](const Rows& rows, double floor) {
            return terms_to_list(
                birkhoff_decompose(StochasticMatrix::from_rows(rows), floor));
        },
        py::arg("matrix"), py::arg("floor") = 1e-9,
        "Greedy BvN peeling; returns [(alpha, dst_of_src), ...].");

    m.def(
        "top_q",
        [](const PyTerms& terms, int q) { return terms_to_list(top_q(terms_from_list(terms), q)); },
        py::arg("terms"), py::arg("q"));

    m.def(
        "uniform_rates",
        [](int n, double rho) { return to_rows(uniform_rates(n, rho)); },
        py::arg("n"), py::arg("rho"));

    m.def(
        "nonuniform_rates",
        [](int n, double rho, int m_, std::uint64_t seed) {
            Rng rng(seed);
            return to_rows(nonuniform_rates(n, rho, m_, rng));
        },
        py::arg("n"), py::arg("rho"), py::arg("m") = 100, py::arg("seed") = 1);

    m.def(
        "load",
        [](const Rows& rows) { return load(RateMatrix::from_rows(rows)); },
        py::arg("rates"));

    m.def(
        "dwell_bound",
        [](double gamma, double delta, double big_g, int n, int a_max, std::int64_t t_prime) {
            return dwell_bound(HysteresisFn::power_law(gamma, delta), big_g, n, a_max,
                               t_prime);
        },
        py::arg("gamma"), py::arg("delta"), py::arg("G"), py::arg("n"), py::arg("a_max"),
        py::arg("t_prime"));

    m.def(
        "check_gf_admissibility",
        [](double gamma, double delta, double alpha) {
            return check_gf_admissibility(HysteresisFn::power_law(gamma, delta),
                                          weight_fn(alpha));
        },
        py::arg("gamma"), py::arg("delta"), py::arg("alpha"));

    m.def("run", &run_config_json, py::arg("config_json"),
          "Run one simulation from an experiment config (JSON string); returns the "
          "metrics dict, with per-decision trace rows when params.trace is set.");
}
