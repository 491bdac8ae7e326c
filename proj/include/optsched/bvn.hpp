#pragma once

#include <stdexcept>
#include <vector>

#include "optsched/core.hpp"
#include "optsched/matching.hpp"

namespace optsched {

/// Doubly stochastic matrix: every row and column sum within tol of 1.
struct StochasticMatrix {
    int n = 0;
    std::vector<double> b;

    StochasticMatrix() = default;
    explicit StochasticMatrix(int n_) : n(n_), b(static_cast<size_t>(n_) * n_, 0.0) {}
    static StochasticMatrix from_rows(const std::vector<std::vector<double>>& rows);

    double at(int i, int j) const { return b[static_cast<size_t>(i) * n + j]; }
    double& at(int i, int j) { return b[static_cast<size_t>(i) * n + j]; }

    /// Largest deviation of any row or column sum from 1.
    double line_sum_residual() const;
};

struct BvnTerm {
    double alpha = 0.0;
    Schedule schedule;
};

/// Convex combination of permutations reconstructing a doubly stochastic
/// matrix; at most n^2 - 2n + 2 terms.
struct BvnDecomposition {
    std::vector<BvnTerm> terms;

    double coefficient_sum() const;
    /// Entrywise infinity-norm of (sum_i alpha_i P_i) - B.
    double reconstruction_error(const StochasticMatrix& b) const;
};

/// Raised when the alternating scaling fails to reach tol within max_iter.
class SinkhornError : public std::runtime_error {
public:
    SinkhornError(double residual_, int iterations_);
    double residual;
    int iterations;
};

/// Scales a nonnegative matrix to doubly stochastic form by alternating
/// row/column normalization. A uniform smoothing term eps * max(1, mean)
/// with eps = 1e-6 is added first, which makes the iteration convergent for
/// any input including zero rows or columns.
StochasticMatrix sinkhorn_scale(const WeightGrid& raw, double tol = 1e-12,
                                int max_iter = 10000);
StochasticMatrix sinkhorn_scale(const QueueMatrix& queues, double tol = 1e-12,
                                int max_iter = 10000);

/// Greedy Birkhoff-von-Neumann peeling: repeatedly match on the strictly
/// positive support, subtract the minimum matched entry, and record the term.
/// Stops when the residual mass falls below n * floor; the leftover is
/// discarded and coefficients are renormalized to sum to 1.
BvnDecomposition birkhoff_decompose(const StochasticMatrix& b, double floor = 1e-9);

/// Keeps the Q largest-coefficient terms (ties by extraction order) and
/// renormalizes; result is ordered by descending coefficient.
BvnDecomposition top_q(const BvnDecomposition& decomposition, int q);

}  // namespace optsched
