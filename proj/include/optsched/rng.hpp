#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace optsched {

// Deterministic random stream. mt19937_64 output is pinned by the standard;
// the derived draws below avoid std::uniform_* distributions, whose exact
// sequences are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here.
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    /// Fisher-Yates draw of a uniformly random permutation of {0..n-1}.
    std::vector<int> random_permutation(int n) {
        std::vector<int> p(static_cast<size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
        return p;
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 step; used to derive independent stream seeds from one seed.
inline std::uint64_t split_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace optsched
