#pragma once

#include <span>
#include <vector>

#include "optsched/core.hpp"
#include "optsched/rng.hpp"

namespace optsched {

/// Bernoulli arrival rates per edge queue; zero diagonal, entries in [0,1].
struct RateMatrix {
    int n = 0;
    std::vector<double> rates;

    RateMatrix() = default;
    explicit RateMatrix(int n_) : n(n_), rates(static_cast<size_t>(n_) * n_, 0.0) {}
    static RateMatrix from_rows(const std::vector<std::vector<double>>& rows);

    double at(int i, int j) const { return rates[static_cast<size_t>(i) * n + j]; }
    double& at(int i, int j) { return rates[static_cast<size_t>(i) * n + j]; }

    void validate() const;
};

/// lambda_ij = rho / n off the diagonal. The nominal per-entry rate follows
/// the uniform-traffic definition; the resulting effective load is
/// rho * (n-1) / n because the diagonal carries no queue.
RateMatrix uniform_rates(int n, double rho);

/// Average of m uniformly random derangement permutation matrices, scaled by
/// rho. Fixed-point permutations are rejected since a self-edge has no queue;
/// this keeps every line sum exactly rho.
RateMatrix nonuniform_rates(int n, double rho, int m, Rng& rng);

/// Load of the rate matrix for a non-blocking crossbar: the maximum over all
/// row sums and column sums.
double load(const RateMatrix& rates);

/// Independent Bernoulli(lambda_ij) arrivals per off-diagonal cell; A_max = 1.
QueueMatrix sample_arrivals(const RateMatrix& rates, Rng& rng);

/// Allocation-free variant for the simulation loop; writes the n*n arrival
/// matrix into `out` (row-major, diagonal zero).
void sample_arrivals_into(const RateMatrix& rates, Rng& rng, std::span<std::int64_t> out);

}  // namespace optsched
