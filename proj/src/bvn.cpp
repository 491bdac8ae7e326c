#include "optsched/bvn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace optsched {

StochasticMatrix StochasticMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    StochasticMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("StochasticMatrix: rows must form a square matrix");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

double StochasticMatrix::line_sum_residual() const {
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < n; ++j) {
            row += at(i, j);
            col += at(j, i);
        }
        residual = std::max({residual, std::abs(row - 1.0), std::abs(col - 1.0)});
    }
    return residual;
}

double BvnDecomposition::coefficient_sum() const {
    double sum = 0.0;
    for (const BvnTerm& term : terms) sum += term.alpha;
    return sum;
}

double BvnDecomposition::reconstruction_error(const StochasticMatrix& b) const {
    StochasticMatrix rebuilt(b.n);
    for (const BvnTerm& term : terms)
        for (int src = 0; src < b.n; ++src)
            rebuilt.at(src, term.schedule.dst_of(src)) += term.alpha;
    double err = 0.0;
    for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j)
            err = std::max(err, std::abs(rebuilt.at(i, j) - b.at(i, j)));
    return err;
}

namespace {
std::string sinkhorn_message(double residual, int iterations) {
    std::ostringstream out;
    out << "sinkhorn_scale: no convergence after " << iterations
        << " sweeps, line-sum residual " << residual;
    return out.str();
}
}  // namespace

SinkhornError::SinkhornError(double residual_, int iterations_)
    : std::runtime_error(sinkhorn_message(residual_, iterations_)),
      residual(residual_),
      iterations(iterations_) {}

StochasticMatrix sinkhorn_scale(const WeightGrid& raw, double tol, int max_iter) {
    raw.validate();
    const int n = raw.n;
    const double mean =
        std::accumulate(raw.w.begin(), raw.w.end(), 0.0) / (static_cast<double>(n) * n);
    const double eps = 1e-6 * std::max(1.0, mean);

    StochasticMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.at(i, j) = raw.at(i, j) + eps;

    double residual = b.line_sum_residual();
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += b.at(i, j);
            for (int j = 0; j < n; ++j) b.at(i, j) /= row;
        }
        for (int j = 0; j < n; ++j) {
            double col = 0.0;
            for (int i = 0; i < n; ++i) col += b.at(i, j);
            for (int i = 0; i < n; ++i) b.at(i, j) /= col;
        }
        residual = b.line_sum_residual();
        if (residual < tol) return b;
    }
    throw SinkhornError(residual, max_iter);
}

StochasticMatrix sinkhorn_scale(const QueueMatrix& queues, double tol, int max_iter) {
    WeightGrid grid(queues.size());
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            grid.at(i, j) = static_cast<double>(queues.at(i, j));
    return sinkhorn_scale(grid, tol, max_iter);
}

BvnDecomposition birkhoff_decompose(const StochasticMatrix& b, double floor) {
    const int n = b.n;
    StochasticMatrix residual = b;
    double mass = 0.0;
    for (double x : residual.b) {
        if (x < 0.0) throw std::invalid_argument("birkhoff_decompose: negative entry");
        mass += x;
    }

    BvnDecomposition decomposition;
    const int term_bound = n * n - 2 * n + 2;
    while (mass >= n * floor) {
        WeightGrid support(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (residual.at(i, j) > 0.0) support.at(i, j) = 1.0;

        const Assignment match = max_weight_assignment(support);
        if (match.total < static_cast<double>(n) - 0.5) {
            std::ostringstream out;
            out << "birkhoff_decompose: no perfect matching on positive support, "
                << "residual mass " << mass << " (input not doubly stochastic?)";
            throw std::runtime_error(out.str());
        }

        double alpha = residual.at(0, match.schedule.dst_of(0));
        for (int i = 1; i < n; ++i)
            alpha = std::min(alpha, residual.at(i, match.schedule.dst_of(i)));

        for (int i = 0; i < n; ++i) {
            const int j = match.schedule.dst_of(i);
            // x - x == 0 exactly, so the minimum cell leaves the support.
            residual.at(i, j) = (residual.at(i, j) == alpha) ? 0.0 : residual.at(i, j) - alpha;
        }
        mass -= alpha * n;
        decomposition.terms.push_back({alpha, match.schedule});

        if (static_cast<int>(decomposition.terms.size()) > term_bound) {
            std::ostringstream out;
            out << "birkhoff_decompose: term count exceeded the n^2-2n+2 bound ("
                << term_bound << ")";
            throw std::runtime_error(out.str());
        }
    }

    const double sum = decomposition.coefficient_sum();
    if (sum <= 0.0)
        throw std::runtime_error("birkhoff_decompose: empty decomposition (zero mass input)");
    for (BvnTerm& term : decomposition.terms) term.alpha /= sum;
    return decomposition;
}

BvnDecomposition top_q(const BvnDecomposition& decomposition, int q) {
    if (q < 1) throw std::invalid_argument("top_q: Q must be at least 1");

    std::vector<size_t> order(decomposition.terms.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return decomposition.terms[a].alpha > decomposition.terms[b].alpha;
    });
    if (static_cast<size_t>(q) < order.size()) order.resize(static_cast<size_t>(q));

    BvnDecomposition kept;
    double sum = 0.0;
    for (size_t idx : order) {
        kept.terms.push_back(decomposition.terms[idx]);
        sum += decomposition.terms[idx].alpha;
    }
    for (BvnTerm& term : kept.terms) term.alpha /= sum;
    return kept;
}

}  // namespace optsched
