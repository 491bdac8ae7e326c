#pragma once

#include <vector>

#include "optsched/core.hpp"

namespace optsched {

/// Dense nonnegative real matrix fed to the assignment solver (typically
/// f applied elementwise to queue occupancies).
struct WeightGrid {
    int n = 0;
    std::vector<double> w;

    WeightGrid() = default;
    explicit WeightGrid(int n_) : n(n_), w(static_cast<size_t>(n_) * n_, 0.0) {}
    static WeightGrid from_rows(const std::vector<std::vector<double>>& rows);
    static WeightGrid from_queues(const QueueMatrix& queues,
                                  const WeightFn& f = WeightFn::identity());

    double at(int i, int j) const { return w[static_cast<size_t>(i) * n + j]; }
    double& at(int i, int j) { return w[static_cast<size_t>(i) * n + j]; }

    void validate() const;
};

struct Assignment {
    Schedule schedule;
    double total = 0.0;
};

/// Exact maximum weight assignment over full permutations (shortest
/// augmenting path / Jonker-Volgenant, O(n^3)). Deterministic for a given
/// input; ties resolved by the solver's fixed scan order.
Assignment max_weight_assignment(const WeightGrid& grid);

/// Maximum cardinality matching over the true cells, completed to a full
/// schedule. Cardinality equals the optimal assignment on the 0/1 grid.
struct BoolGrid {
    int n = 0;
    std::vector<std::uint8_t> cells;

    BoolGrid() = default;
    explicit BoolGrid(int n_) : n(n_), cells(static_cast<size_t>(n_) * n_, 0) {}

    bool at(int i, int j) const { return cells[static_cast<size_t>(i) * n + j] != 0; }
    void set(int i, int j, bool v) { cells[static_cast<size_t>(i) * n + j] = v ? 1 : 0; }
};

Schedule max_size_matching(const BoolGrid& mask);

/// Fills a partial schedule to a full one: unmatched sources are paired with
/// unmatched destinations in ascending index order. A self-edge appears only
/// when an index is unmatched on both sides.
Schedule complete_to_permutation(const Schedule& partial);

/// Exhaustive oracle over all n! permutations; refuses n > 8.
Assignment brute_force_assignment(const WeightGrid& grid);

}  // namespace optsched
