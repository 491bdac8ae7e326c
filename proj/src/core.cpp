#include "optsched/core.hpp"

#include <numeric>

namespace optsched {

QueueMatrix QueueMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    const int n = static_cast<int>(rows.size());
    QueueMatrix q(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw std::invalid_argument("QueueMatrix: rows must form a square matrix");
        for (int j = 0; j < n; ++j) {
            if (rows[i][j] != 0) q.set(i, j, rows[i][j]);
        }
    }
    return q;
}

void QueueMatrix::set(int src, int dst, std::int64_t packets) {
    if (src < 0 || src >= n_ || dst < 0 || dst >= n_)
        throw std::out_of_range("QueueMatrix: index out of range");
    if (packets < 0)
        throw std::invalid_argument("QueueMatrix: occupancy must be nonnegative");
    if (src == dst && packets != 0)
        throw std::invalid_argument("QueueMatrix: diagonal is fixed at zero");
    cells_[static_cast<size_t>(src) * n_ + dst] = packets;
}

std::int64_t QueueMatrix::total() const {
    return std::accumulate(cells_.begin(), cells_.end(), std::int64_t{0});
}

std::int64_t total_queue(const QueueMatrix& queues) { return queues.total(); }

Schedule Schedule::identity(int n) {
    Schedule s(n);
    for (int i = 0; i < n; ++i) s.assign(i, i);
    return s;
}

Schedule Schedule::from_permutation(const std::vector<int>& dst_of_src) {
    Schedule s(static_cast<int>(dst_of_src.size()));
    for (int src = 0; src < s.size(); ++src) {
        if (dst_of_src[src] >= 0) s.assign(src, dst_of_src[src]);
    }
    return s;
}

void Schedule::assign(int src, int dst) {
    if (src < 0 || src >= n_ || dst < 0 || dst >= n_)
        throw std::out_of_range("Schedule: index out of range");
    if (dst_of_[src] != -1 || src_of_[dst] != -1)
        throw std::invalid_argument("Schedule: source or destination already matched");
    dst_of_[src] = dst;
    src_of_[dst] = src;
    ++assigned_;
}

int Schedule::real_edge_count() const {
    int count = 0;
    for (int src = 0; src < n_; ++src)
        if (dst_of_[src] >= 0 && dst_of_[src] != src) ++count;
    return count;
}

WeightFn WeightFn::power(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("WeightFn: alpha must be positive");
    return {Kind::power, alpha};
}

HysteresisFn HysteresisFn::power_law(double gamma, double delta) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("HysteresisFn: gamma must lie in (0,1)");
    if (!(delta >= 0.0 && delta < 1.0))
        throw std::invalid_argument("HysteresisFn: delta must lie in [0,1)");
    return {gamma, delta};
}

double eval_hysteresis(const HysteresisFn& g, double x) {
    if (x < 0.0) throw std::invalid_argument("eval_hysteresis: x must be nonnegative");
    if (x == 0.0) return 0.0;
    return (1.0 - g.gamma) * std::pow(x, 1.0 - g.delta);
}

double invert_hysteresis(const HysteresisFn& g, double y) {
    if (y < 0.0) throw std::invalid_argument("invert_hysteresis: y must be nonnegative");
    if (y == 0.0) return 0.0;
    return std::pow(y / (1.0 - g.gamma), 1.0 / (1.0 - g.delta));
}

double weight(const QueueMatrix& queues, const Schedule& schedule, const WeightFn& f) {
    if (queues.size() != schedule.size())
        throw std::invalid_argument("weight: queue matrix and schedule dimensions differ");
    double sum = 0.0;
    for (int src = 0; src < schedule.size(); ++src) {
        const int dst = schedule.dst_of(src);
        if (dst >= 0 && dst != src)
            sum += f(static_cast<double>(queues.at(src, dst)));
    }
    return sum;
}

}  // namespace optsched
