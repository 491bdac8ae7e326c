#include "optsched/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "optsched/bvn.hpp"
#include "optsched/matching.hpp"

namespace optsched {

PolicySpec PolicySpec::max_weight(WeightFn f) {
    PolicySpec spec;
    spec.kind = PolicyKind::max_weight;
    spec.f = f;
    return spec;
}

PolicySpec PolicySpec::adaptive(PolicySpec base_policy, HysteresisFn g, WeightFn f) {
    if (base_policy.kind == PolicyKind::adaptive)
        throw std::invalid_argument("PolicySpec: adaptive wrapper cannot nest");
    PolicySpec spec;
    spec.kind = PolicyKind::adaptive;
    spec.g = g;
    spec.f = f;
    spec.base = std::make_shared<const PolicySpec>(std::move(base_policy));
    return spec;
}

PolicySpec PolicySpec::pipelined_max_weight(int k) {
    PolicySpec spec;
    spec.kind = PolicyKind::pipelined_max_weight;
    spec.pipeline_delay = k;
    return spec;
}

PolicySpec PolicySpec::tassiulas_random() {
    PolicySpec spec;
    spec.kind = PolicyKind::tassiulas_random;
    return spec;
}

PolicySpec PolicySpec::hamiltonian() {
    PolicySpec spec;
    spec.kind = PolicyKind::hamiltonian;
    return spec;
}

PolicySpec PolicySpec::max_size() {
    PolicySpec spec;
    spec.kind = PolicyKind::max_size;
    return spec;
}

PolicySpec PolicySpec::ffmw(std::int64_t t) {
    PolicySpec spec;
    spec.kind = PolicyKind::ffmw;
    spec.frame_length = t;
    return spec;
}

PolicySpec PolicySpec::vfmw(double c, double beta) {
    PolicySpec spec;
    spec.kind = PolicyKind::vfmw;
    spec.vfmw_scale = c;
    spec.vfmw_exponent = beta;
    return spec;
}

PolicySpec PolicySpec::tms(std::int64_t w, int q) {
    PolicySpec spec;
    spec.kind = PolicyKind::tms;
    spec.tms_window = w;
    spec.tms_max_terms = q;
    return spec;
}

void PolicySpec::validate() const {
    switch (kind) {
        case PolicyKind::max_weight:
            break;
        case PolicyKind::adaptive:
            if (!base) throw std::invalid_argument("adaptive policy needs a base policy");
            if (base->kind == PolicyKind::adaptive)
                throw std::invalid_argument("adaptive wrapper cannot nest");
            HysteresisFn::power_law(g.gamma, g.delta);  // range check
            base->validate();
            break;
        case PolicyKind::pipelined_max_weight:
            if (pipeline_delay < 0)
                throw std::invalid_argument("pipelined_max_weight: K must be nonnegative");
            break;
        case PolicyKind::ffmw:
            if (frame_length < 1) throw std::invalid_argument("ffmw: T must be at least 1");
            break;
        case PolicyKind::vfmw:
            if (!(vfmw_scale > 0.0)) throw std::invalid_argument("vfmw: c must be positive");
            if (!(vfmw_exponent > 0.0 && vfmw_exponent < 1.0))
                throw std::invalid_argument("vfmw: beta must lie in (0,1)");
            break;
        case PolicyKind::tms:
            if (tms_max_terms < 1) throw std::invalid_argument("tms: Q must be at least 1");
            if (tms_window < tms_max_terms)
                throw std::invalid_argument("tms: need W >= Q to give every schedule a slot");
            break;
        default:
            break;
    }
}

std::string PolicySpec::label() const {
    switch (kind) {
        case PolicyKind::max_weight:
            return f.kind == WeightFn::Kind::power ? "max_weight_alpha" : "max_weight";
        case PolicyKind::adaptive:
            return "adaptive:" + (base ? base->label() : std::string("?"));
        case PolicyKind::pipelined_max_weight: {
            std::ostringstream out;
            out << "pipelined_k" << pipeline_delay;
            return out.str();
        }
        case PolicyKind::tassiulas_random:
            return "tassiulas_random";
        case PolicyKind::hamiltonian:
            return "hamiltonian";
        case PolicyKind::max_size:
            return "max_size";
        case PolicyKind::ffmw:
            return "ffmw";
        case PolicyKind::vfmw:
            return "vfmw";
        case PolicyKind::tms:
            return "tms";
    }
    return "?";
}

bool PolicySpec::operator==(const PolicySpec& other) const {
    if (kind != other.kind || !(f == other.f) || !(g == other.g) ||
        pipeline_delay != other.pipeline_delay || frame_length != other.frame_length ||
        vfmw_scale != other.vfmw_scale || vfmw_exponent != other.vfmw_exponent ||
        tms_window != other.tms_window || tms_max_terms != other.tms_max_terms)
        return false;
    if (static_cast<bool>(base) != static_cast<bool>(other.base)) return false;
    return !base || *base == *other.base;
}

PolicyState make_policy_state(const PolicySpec& spec, int n, std::int64_t delta_r) {
    spec.validate();
    PolicyState state;
    state.n = n;
    state.delta_r = delta_r;
    const PolicySpec& inner = spec.kind == PolicyKind::adaptive ? *spec.base : spec;
    if (inner.kind == PolicyKind::tassiulas_random || inner.kind == PolicyKind::hamiltonian)
        state.memory = Schedule::identity(n);
    if (inner.kind == PolicyKind::hamiltonian) {
        state.walk_permutation.resize(static_cast<size_t>(n));
        std::iota(state.walk_permutation.begin(), state.walk_permutation.end(), 0);
        state.walk_direction.assign(static_cast<size_t>(n), -1);
    }
    return state;
}

namespace {

Assignment propose_max_weight(const QueueMatrix& queues, const WeightFn& f) {
    return max_weight_assignment(WeightGrid::from_queues(queues, f));
}

// MaxWeight-family decisions keep the previous schedule when it already
// achieves the proposal's objective value; switching on a tie would pay the
// reconfiguration delay for nothing.
Decision keep_or_switch(const Observation& obs, Assignment proposal, double previous_value) {
    if (previous_value >= proposal.total) return {obs.previous, false};
    const bool changed = !(proposal.schedule == obs.previous);
    return {std::move(proposal.schedule), changed};
}

Decision decide_max_weight(const PolicySpec& spec, const Observation& obs) {
    Assignment proposal = propose_max_weight(obs.queues, spec.f);
    const double previous_value = weight(obs.queues, obs.previous, spec.f);
    return keep_or_switch(obs, std::move(proposal), previous_value);
}

Decision decide_pipelined(const PolicySpec& spec, PolicyState& state, const Observation& obs) {
    state.pipeline.push_back(obs.queues);
    while (static_cast<int>(state.pipeline.size()) > spec.pipeline_delay + 1)
        state.pipeline.pop_front();
    const QueueMatrix& stale = state.pipeline.front();  // L(t-K), clamped to L(0)
    Assignment proposal = propose_max_weight(stale, WeightFn::identity());
    const double previous_value = weight(stale, obs.previous, WeightFn::identity());
    return keep_or_switch(obs, std::move(proposal), previous_value);
}

Decision decide_max_size(const Observation& obs) {
    const int n = obs.queues.size();
    BoolGrid nonempty(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && obs.queues.at(i, j) > 0) nonempty.set(i, j, true);

    Schedule proposal = max_size_matching(nonempty);
    int proposal_size = 0, previous_size = 0;
    for (int i = 0; i < n; ++i) {
        if (nonempty.at(i, proposal.dst_of(i))) ++proposal_size;
        const int prev_dst = obs.previous.dst_of(i);
        if (prev_dst >= 0 && nonempty.at(i, prev_dst)) ++previous_size;
    }
    if (previous_size >= proposal_size) return {obs.previous, false};
    const bool changed = !(proposal == obs.previous);
    return {std::move(proposal), changed};
}

Decision decide_tassiulas(PolicyState& state, const Observation& obs, Rng& rng) {
    const Schedule candidate =
        Schedule::from_permutation(rng.random_permutation(state.n));
    const double memory_weight = weight(obs.queues, state.memory);
    const double candidate_weight = weight(obs.queues, candidate);
    if (memory_weight < candidate_weight) state.memory = candidate;
    return {state.memory, !(state.memory == obs.previous)};
}

Decision decide_hamiltonian(PolicyState& state, const Observation& obs) {
    const Schedule on_path = Schedule::from_permutation(sjt_advance(state));
    const double memory_weight = weight(obs.queues, state.memory);
    const double path_weight = weight(obs.queues, on_path);
    if (memory_weight < path_weight) state.memory = on_path;
    return {state.memory, !(state.memory == obs.previous)};
}

Decision decide_ffmw(const PolicySpec& spec, const Observation& obs) {
    if (obs.t % spec.frame_length != 0) return {obs.previous, false};
    return decide_max_weight(PolicySpec::max_weight(), obs);
}

Decision decide_vfmw(const PolicySpec& spec, PolicyState& state, const Observation& obs) {
    if (obs.t < state.next_decision_t) return {obs.previous, false};
    const double batch = static_cast<double>(1 + total_queue(obs.queues));
    const std::int64_t duration =
        state.delta_r +
        static_cast<std::int64_t>(std::ceil(spec.vfmw_scale * std::pow(batch, spec.vfmw_exponent)));
    state.next_decision_t = obs.t + duration;
    return decide_max_weight(PolicySpec::max_weight(), obs);
}

void build_tms_plan(const PolicySpec& spec, PolicyState& state, const QueueMatrix& queues) {
    state.tms_plan.clear();
    state.tms_slot_boundaries.clear();
    try {
        const StochasticMatrix scaled = sinkhorn_scale(queues);
        const BvnDecomposition kept =
            top_q(birkhoff_decompose(scaled), spec.tms_max_terms);
        const std::vector<std::int64_t> slots = allocate_frame_slots(kept, spec.tms_window);
        std::int64_t boundary = 0;
        for (size_t i = 0; i < kept.terms.size(); ++i) {
            if (slots[i] == 0) continue;
            boundary += slots[i];
            state.tms_plan.push_back(kept.terms[i].schedule);
            state.tms_slot_boundaries.push_back(boundary);
        }
    } catch (const std::exception&) {
        // Scaling or peeling failed; serve the frame with plain MaxWeight.
        ++state.tms_fallbacks;
        state.tms_plan.push_back(propose_max_weight(queues, WeightFn::identity()).schedule);
        state.tms_slot_boundaries.push_back(spec.tms_window);
    }
}

Decision decide_tms(const PolicySpec& spec, PolicyState& state, const Observation& obs) {
    const std::int64_t frame = obs.t / spec.tms_window;
    if (frame != state.tms_frame || state.tms_plan.empty()) {
        build_tms_plan(spec, state, obs.queues);
        state.tms_frame = frame;
    }
    const std::int64_t position = obs.t % spec.tms_window;
    size_t index = 0;
    while (index + 1 < state.tms_slot_boundaries.size() &&
           position >= state.tms_slot_boundaries[index])
        ++index;
    const Schedule& scheduled = state.tms_plan[index];
    return {scheduled, !(scheduled == obs.previous)};
}

Decision decide_adaptive(const PolicySpec& spec, PolicyState& state, const Observation& obs,
                         Rng& rng) {
    Decision base_decision = decide(*spec.base, state, obs, rng);
    const Schedule& proposal = base_decision.schedule;
    const double proposal_weight = weight(obs.queues, proposal, spec.f);
    const double previous_weight = weight(obs.queues, obs.previous, spec.f);
    const double improvement = proposal_weight - previous_weight;
    if (improvement > eval_hysteresis(spec.g, proposal_weight)) {
        const bool changed = !(proposal == obs.previous);
        return {std::move(base_decision.schedule), changed};
    }
    return {obs.previous, false};
}

}  // namespace

std::vector<std::int64_t> allocate_frame_slots(const BvnDecomposition& kept,
                                               std::int64_t window) {
    const size_t q = kept.terms.size();
    std::vector<std::int64_t> slots(q);
    std::vector<double> remainders(q);
    std::int64_t assigned = 0;
    for (size_t i = 0; i < q; ++i) {
        const double quota = kept.terms[i].alpha * static_cast<double>(window);
        slots[i] = static_cast<std::int64_t>(std::floor(quota));
        remainders[i] = quota - static_cast<double>(slots[i]);
        assigned += slots[i];
    }
    std::vector<size_t> order(q);
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return remainders[a] > remainders[b]; });
    for (size_t k = 0; assigned < window; ++k) {
        ++slots[order[k % q]];
        ++assigned;
    }
    return slots;
}

const std::vector<int>& sjt_advance(PolicyState& state) {
    std::vector<int>& perm = state.walk_permutation;
    std::vector<int>& dir = state.walk_direction;
    const int n = static_cast<int>(perm.size());
    if (n < 2) return perm;

    int mobile_pos = -1;
    for (int i = 0; i < n; ++i) {
        const int j = i + dir[static_cast<size_t>(i)];
        if (j < 0 || j >= n) continue;
        if (perm[static_cast<size_t>(j)] < perm[static_cast<size_t>(i)] &&
            (mobile_pos < 0 ||
             perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(mobile_pos)]))
            mobile_pos = i;
    }

    if (mobile_pos < 0) {
        // End of the enumeration; the closing adjacent transposition returns
        // the walk to the identity and the cycle restarts.
        std::swap(perm[0], perm[1]);
        std::fill(dir.begin(), dir.end(), -1);
        return perm;
    }

    const int value = perm[static_cast<size_t>(mobile_pos)];
    const int target = mobile_pos + dir[static_cast<size_t>(mobile_pos)];
    std::swap(perm[static_cast<size_t>(mobile_pos)], perm[static_cast<size_t>(target)]);
    std::swap(dir[static_cast<size_t>(mobile_pos)], dir[static_cast<size_t>(target)]);
    for (int i = 0; i < n; ++i)
        if (perm[static_cast<size_t>(i)] > value)
            dir[static_cast<size_t>(i)] = -dir[static_cast<size_t>(i)];
    return perm;
}

Decision decide(const PolicySpec& spec, PolicyState& state, const Observation& obs, Rng& rng) {
    switch (spec.kind) {
        case PolicyKind::max_weight:
            return decide_max_weight(spec, obs);
        case PolicyKind::adaptive:
            return decide_adaptive(spec, state, obs, rng);
        case PolicyKind::pipelined_max_weight:
            return decide_pipelined(spec, state, obs);
        case PolicyKind::tassiulas_random:
            return decide_tassiulas(state, obs, rng);
        case PolicyKind::hamiltonian:
            return decide_hamiltonian(state, obs);
        case PolicyKind::max_size:
            return decide_max_size(obs);
        case PolicyKind::ffmw:
            return decide_ffmw(spec, obs);
        case PolicyKind::vfmw:
            return decide_vfmw(spec, state, obs);
        case PolicyKind::tms:
            return decide_tms(spec, state, obs);
    }
    throw std::logic_error("decide: unknown policy kind");
}

double dwell_bound(const HysteresisFn& g, double big_g, int n, int a_max,
                   std::int64_t t_prime) {
    const double drift = static_cast<double>(n) * (a_max + 1) * static_cast<double>(t_prime);
    return invert_hysteresis(g, big_g + drift) +
           static_cast<double>(n) * static_cast<double>(t_prime);
}

bool check_gf_admissibility(const HysteresisFn& g, const WeightFn& f) {
    const double alpha = f.kind == WeightFn::Kind::identity ? 1.0 : f.alpha;
    // lim x^(alpha-1) / g(x^alpha) = 0  iff  alpha - 1 < alpha * (1 - delta).
    return alpha - 1.0 < alpha * (1.0 - g.delta);
}

}  // namespace optsched
