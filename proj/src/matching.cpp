#include "optsched/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace optsched {

WeightGrid WeightGrid::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    WeightGrid g(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("WeightGrid: rows must form a square matrix");
        for (int j = 0; j < n; ++j) g.at(i, j) = rows[i][j];
    }
    g.validate();
    return g;
}

WeightGrid WeightGrid::from_queues(const QueueMatrix& queues, const WeightFn& f) {
    WeightGrid g(queues.size());
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (i != j) g.at(i, j) = f(static_cast<double>(queues.at(i, j)));
    return g;
}

void WeightGrid::validate() const {
    for (double x : w)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw std::invalid_argument("WeightGrid: entries must be finite and nonnegative");
}

// Shortest augmenting path assignment with row/column potentials, solved as
// min-cost on negated weights. Scan order is fixed, so the output permutation
// is deterministic for a given grid.
Assignment max_weight_assignment(const WeightGrid& grid) {
    grid.validate();
    const int n = grid.n;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> matched_row(n + 1, 0), way(n + 1, 0);
    std::vector<double> min_slack(n + 1);
    std::vector<char> used(n + 1);

    for (int i = 1; i <= n; ++i) {
        matched_row[0] = i;
        int j0 = 0;
        std::fill(min_slack.begin(), min_slack.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = matched_row[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -grid.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[j0] != 0);
        do {
            const int j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    Schedule schedule(n);
    double total = 0.0;
    for (int j = 1; j <= n; ++j) {
        schedule.assign(matched_row[j] - 1, j - 1);
        total += grid.at(matched_row[j] - 1, j - 1);
    }
    return {std::move(schedule), total};
}

Schedule max_size_matching(const BoolGrid& mask) {
    WeightGrid indicator(mask.n);
    for (int i = 0; i < mask.n; ++i)
        for (int j = 0; j < mask.n; ++j)
            if (mask.at(i, j)) indicator.at(i, j) = 1.0;

    const Assignment assignment = max_weight_assignment(indicator);

    // Keep only edges that cover true cells; the rest of the permutation is
    // filler the solver chose among zero-weight cells.
    Schedule matching(mask.n);
    for (int src = 0; src < mask.n; ++src) {
        const int dst = assignment.schedule.dst_of(src);
        if (mask.at(src, dst)) matching.assign(src, dst);
    }
    return complete_to_permutation(matching);
}

Schedule complete_to_permutation(const Schedule& partial) {
    const int n = partial.size();
    std::vector<int> free_sources;
    std::vector<int> free_destinations;
    for (int i = 0; i < n; ++i) {
        if (partial.dst_of(i) < 0) free_sources.push_back(i);
        if (partial.src_of(i) < 0) free_destinations.push_back(i);
    }

    Schedule full(n);
    for (int src = 0; src < n; ++src)
        if (partial.dst_of(src) >= 0) full.assign(src, partial.dst_of(src));
    for (size_t k = 0; k < free_sources.size(); ++k)
        full.assign(free_sources[k], free_destinations[k]);
    return full;
}

Assignment brute_force_assignment(const WeightGrid& grid) {
    grid.validate();
    const int n = grid.n;
    if (n > 8)
        throw std::invalid_argument("brute_force_assignment: refusing n > 8 (n! blowup)");

    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_total = -1.0;
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += grid.at(i, perm[i]);
        if (total > best_total) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    return {Schedule::from_permutation(best), best_total};
}

}  // namespace optsched
