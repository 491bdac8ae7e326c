#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "optsched/core.hpp"
#include "optsched/rng.hpp"

namespace optsched {

/// What a policy sees when asked for a schedule: a queue snapshot (possibly
/// stale by the monitoring delay), the schedule currently in force, and the
/// slot index. The engine never asks for a decision mid-reconfiguration.
struct Observation {
    const QueueMatrix& queues;
    const Schedule& previous;
    std::int64_t t = 0;
    bool in_reconfig = false;
};

struct Decision {
    Schedule schedule;
    bool changed = false;  // == (schedule != previous)
};

enum class PolicyKind {
    max_weight,
    adaptive,
    pipelined_max_weight,
    tassiulas_random,
    hamiltonian,
    max_size,
    ffmw,
    vfmw,
    tms,
};

/// Declarative description of a scheduling policy. The adaptive wrapper
/// holds a base spec; nesting depth is limited to one.
struct PolicySpec {
    PolicyKind kind = PolicyKind::max_weight;

    WeightFn f{};                                 // max_weight / adaptive comparison weight
    HysteresisFn g{};                             // adaptive
    std::shared_ptr<const PolicySpec> base;       // adaptive
    int pipeline_delay = 0;                       // pipelined: K slots
    std::int64_t frame_length = 1;                // ffmw: T slots
    double vfmw_scale = 1.0;                      // vfmw: c
    double vfmw_exponent = 0.5;                   // vfmw: beta
    std::int64_t tms_window = 1;                  // tms: W slots
    int tms_max_terms = 1;                        // tms: Q schedules per window

    static PolicySpec max_weight(WeightFn f = WeightFn::identity());
    static PolicySpec adaptive(PolicySpec base_policy, HysteresisFn g,
                               WeightFn f = WeightFn::identity());
    static PolicySpec pipelined_max_weight(int k);
    static PolicySpec tassiulas_random();
    static PolicySpec hamiltonian();
    static PolicySpec max_size();
    static PolicySpec ffmw(std::int64_t t);
    static PolicySpec vfmw(double c = 1.0, double beta = 0.5);
    static PolicySpec tms(std::int64_t w, int q);

    void validate() const;

    /// Short CSV-safe label, e.g. "adaptive:max_weight".
    std::string label() const;

    bool operator==(const PolicySpec& other) const;
};

/// Per-run mutable memory of a policy. Fields are used by the variants that
/// need them and ignored by the rest.
struct PolicyState {
    int n = 0;
    std::int64_t delta_r = 0;

    Schedule memory;                      // tassiulas / hamiltonian internal memory
    std::deque<QueueMatrix> pipeline;     // pipelined: last K+1 observed snapshots

    std::vector<int> walk_permutation;    // hamiltonian: Steinhaus-Johnson-Trotter walk
    std::vector<int> walk_direction;

    std::int64_t next_decision_t = 0;     // vfmw batch timer

    std::int64_t tms_frame = -1;          // tms frame plan
    std::vector<Schedule> tms_plan;       // schedule per in-frame slot group
    std::vector<std::int64_t> tms_slot_boundaries;  // cumulative slot counts
    std::int64_t tms_fallbacks = 0;       // frames served by MaxWeight after a scaling failure
};

PolicyState make_policy_state(const PolicySpec& spec, int n, std::int64_t delta_r);

/// One scheduling decision; mutates `state` (timers, memories, walk position).
/// Deterministic given (spec, state, observation, rng stream).
Decision decide(const PolicySpec& spec, PolicyState& state, const Observation& obs, Rng& rng);

/// Advances the Steinhaus-Johnson-Trotter walk by one adjacent transposition
/// and returns the new permutation. Exposed for the walk-property tests.
const std::vector<int>& sjt_advance(PolicyState& state);

// Forward declaration; defined in bvn.hpp.
struct BvnDecomposition;

/// Largest-remainder split of a window across decomposition terms. Terms
/// whose share rounds to zero slots receive none and drop out of the frame;
/// every kept schedule therefore holds at least one slot.
std::vector<std::int64_t> allocate_frame_slots(const BvnDecomposition& terms,
                                               std::int64_t window);

/// Lemma-1 dwell level M = g^{-1}(G + n (A_max + 1) T') + n T'. Above this
/// maximum weight, a reconfiguration pins the schedule for at least T' slots.
double dwell_bound(const HysteresisFn& g, double big_g, int n, int a_max,
                   std::int64_t t_prime);

/// Admissibility of the pair (g, f) for the power families: the wrapper on
/// MaxWeight-alpha is throughput optimal iff alpha - 1 < alpha * (1 - delta),
/// i.e. alpha * delta < 1.
bool check_gf_admissibility(const HysteresisFn& g, const WeightFn& f);

}  // namespace optsched
