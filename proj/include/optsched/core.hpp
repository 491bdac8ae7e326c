#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace optsched {

/// Per-edge queue occupancies L for an n-port crossbar. The diagonal is
/// structurally zero: a port never queues traffic to itself.
class QueueMatrix {
public:
    QueueMatrix() = default;

    explicit QueueMatrix(int n) : n_(n), cells_(static_cast<size_t>(n) * n, 0) {
        if (n <= 0) throw std::invalid_argument("QueueMatrix: n must be positive");
    }

    static QueueMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

    int size() const { return n_; }

    std::int64_t at(int src, int dst) const {
        return cells_[static_cast<size_t>(src) * n_ + dst];
    }

    void set(int src, int dst, std::int64_t packets);

    // Unchecked fast path for the simulation loop; callers keep src != dst
    // and the cell nonnegative.
    void add(int src, int dst, std::int64_t delta) {
        cells_[static_cast<size_t>(src) * n_ + dst] += delta;
    }

    std::int64_t total() const;

    std::span<const std::int64_t> cells() const { return cells_; }

    bool operator==(const QueueMatrix&) const = default;

private:
    int n_ = 0;
    std::vector<std::int64_t> cells_;
};

/// Total queue length ||L||.
std::int64_t total_queue(const QueueMatrix& queues);

/// A sub-permutation matrix stored as dst_of(src). Self-edges (src == dst)
/// are legal and mean "port idle"; they never carry traffic. A schedule is
/// full when every source has an assignment.
class Schedule {
public:
    Schedule() = default;

    explicit Schedule(int n)
        : n_(n), dst_of_(static_cast<size_t>(n), -1), src_of_(static_cast<size_t>(n), -1) {
        if (n <= 0) throw std::invalid_argument("Schedule: n must be positive");
    }

    static Schedule identity(int n);
    static Schedule from_permutation(const std::vector<int>& dst_of_src);

    int size() const { return n_; }

    /// Destination connected to `src`, or -1 when unassigned.
    int dst_of(int src) const { return dst_of_[static_cast<size_t>(src)]; }
    /// Source connected to `dst`, or -1 when unassigned.
    int src_of(int dst) const { return src_of_[static_cast<size_t>(dst)]; }

    void assign(int src, int dst);

    int edge_count() const { return assigned_; }
    /// Edges excluding idle self-loops.
    int real_edge_count() const;
    bool full() const { return assigned_ == n_; }

    const std::vector<int>& destinations() const { return dst_of_; }

    bool operator==(const Schedule& other) const {
        return n_ == other.n_ && dst_of_ == other.dst_of_;
    }

private:
    int n_ = 0;
    int assigned_ = 0;
    std::vector<int> dst_of_;
    std::vector<int> src_of_;
};

/// Weight function f applied per queue: identity or x^alpha. Strictly
/// increasing with f(0) = 0.
struct WeightFn {
    enum class Kind { identity, power };

    Kind kind = Kind::identity;
    double alpha = 1.0;

    static WeightFn identity() { return {}; }
    static WeightFn power(double alpha);

    double operator()(double x) const {
        if (kind == Kind::identity) return x;
        return x == 0.0 ? 0.0 : std::pow(x, alpha);
    }

    bool operator==(const WeightFn&) const = default;
};

/// Hysteresis threshold g(x) = (1-gamma) * x^(1-delta); nonnegative,
/// continuous, strictly increasing, and sublinear whenever delta > 0.
struct HysteresisFn {
    double gamma = 0.1;
    double delta = 0.01;

    static HysteresisFn power_law(double gamma, double delta);

    bool sublinear() const { return delta > 0.0; }

    bool operator==(const HysteresisFn&) const = default;
};

double eval_hysteresis(const HysteresisFn& g, double x);

/// Solves g(x) = y for x; exact closed form for the power-law family.
double invert_hysteresis(const HysteresisFn& g, double y);

/// Schedule weight sum f(L_ij) over the schedule's edges (Eq. with f = identity
/// is the plain weight). Self-edges contribute f(0) = 0.
double weight(const QueueMatrix& queues, const Schedule& schedule,
              const WeightFn& f = WeightFn::identity());

}  // namespace optsched
