#include "optsched/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optsched {

RateMatrix RateMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    RateMatrix m(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("RateMatrix: rows must form a square matrix");
        for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    m.validate();
    return m;
}

void RateMatrix::validate() const {
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            throw std::invalid_argument("RateMatrix: diagonal rates must be zero");
        for (int j = 0; j < n; ++j) {
            const double x = at(i, j);
            if (!(x >= 0.0 && x <= 1.0) || !std::isfinite(x))
                throw std::invalid_argument(
                    "RateMatrix: rates must lie in [0,1] (Bernoulli feasibility)");
        }
    }
}

RateMatrix uniform_rates(int n, double rho) {
    if (n < 2) throw std::invalid_argument("uniform_rates: need at least two ports");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("uniform_rates: rho must lie in (0,1)");
    RateMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m.at(i, j) = rho / n;
    return m;
}

RateMatrix nonuniform_rates(int n, double rho, int m, Rng& rng) {
    if (n < 2) throw std::invalid_argument("nonuniform_rates: need at least two ports");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("nonuniform_rates: rho must lie in (0,1)");
    if (m < 1) throw std::invalid_argument("nonuniform_rates: M must be at least 1");

    RateMatrix result(n);
    const double contribution = rho / m;
    for (int drawn = 0; drawn < m;) {
        const std::vector<int> perm = rng.random_permutation(n);
        bool has_fixed_point = false;
        for (int i = 0; i < n; ++i)
            if (perm[i] == i) {
                has_fixed_point = true;
                break;
            }
        if (has_fixed_point) continue;  // self-edges map to nonexistent queues
        for (int i = 0; i < n; ++i) result.at(i, perm[i]) += contribution;
        ++drawn;
    }
    return result;
}

double load(const RateMatrix& rates) {
    double worst = 0.0;
    for (int i = 0; i < rates.n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < rates.n; ++j) {
            row += rates.at(i, j);
            col += rates.at(j, i);
        }
        worst = std::max({worst, row, col});
    }
    return worst;
}

QueueMatrix sample_arrivals(const RateMatrix& rates, Rng& rng) {
    QueueMatrix arrivals(rates.n);
    std::vector<std::int64_t> buffer(static_cast<size_t>(rates.n) * rates.n);
    sample_arrivals_into(rates, rng, buffer);
    for (int i = 0; i < rates.n; ++i)
        for (int j = 0; j < rates.n; ++j)
            if (i != j && buffer[static_cast<size_t>(i) * rates.n + j])
                arrivals.add(i, j, 1);
    return arrivals;
}

void sample_arrivals_into(const RateMatrix& rates, Rng& rng, std::span<std::int64_t> out) {
    const int n = rates.n;
    // One draw per off-diagonal cell, always, so the stream layout does not
    // depend on the rate values.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const size_t idx = static_cast<size_t>(i) * n + j;
            if (i == j) {
                out[idx] = 0;
                continue;
            }
            out[idx] = rng.bernoulli(rates.at(i, j)) ? 1 : 0;
        }
    }
}

}  // namespace optsched
