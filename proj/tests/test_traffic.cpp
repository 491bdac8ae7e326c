#include "doctest.h"

#include <cmath>

#include "optsched/traffic.hpp"

using namespace optsched;

TEST_CASE("uniform rates") {
    const RateMatrix rates = uniform_rates(4, 0.8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(rates.at(i, j) == doctest::Approx(i == j ? 0.0 : 0.2));
    CHECK(load(rates) == doctest::Approx(0.6));

    const RateMatrix two = uniform_rates(2, 0.5);
    CHECK(two.at(0, 1) == doctest::Approx(0.25));
    CHECK(two.at(1, 0) == doctest::Approx(0.25));
    CHECK(load(two) == doctest::Approx(0.25));

    CHECK_THROWS_AS(uniform_rates(4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(uniform_rates(4, 1.0), std::invalid_argument);
}

TEST_CASE("nonuniform rates have exact line sums") {
    Rng rng(9);
    const RateMatrix rates = nonuniform_rates(6, 0.7, 25, rng);
    for (int i = 0; i < 6; ++i) {
        double row = 0.0, col = 0.0;
        CHECK(rates.at(i, i) == 0.0);
        for (int j = 0; j < 6; ++j) {
            row += rates.at(i, j);
            col += rates.at(j, i);
        }
        CHECK(row == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(col == doctest::Approx(0.7).epsilon(1e-12));
    }
    CHECK(load(rates) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("nonuniform with a single permutation is a scaled derangement") {
    Rng rng(3);
    const RateMatrix rates = nonuniform_rates(5, 0.4, 1, rng);
    int nonzero = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (rates.at(i, j) > 0.0) {
                CHECK(i != j);
                CHECK(rates.at(i, j) == doctest::Approx(0.4));
                ++nonzero;
            }
    CHECK(nonzero == 5);
    CHECK(load(rates) == doctest::Approx(0.4));
}

TEST_CASE("nonuniform rates are reproducible under a fixed seed") {
    Rng a(1234), b(1234);
    const RateMatrix first = nonuniform_rates(3, 0.5, 2, a);
    const RateMatrix second = nonuniform_rates(3, 0.5, 2, b);
    CHECK(first.rates == second.rates);
}

TEST_CASE("load is the worst line sum") {
    const RateMatrix rates = RateMatrix::from_rows(
        {{0, 0.3, 0.2}, {0.25, 0, 0.3}, {0.3, 0.25, 0}});
    CHECK(load(rates) == doctest::Approx(0.55));
    CHECK(load(RateMatrix(3)) == 0.0);
}

TEST_CASE("arrivals honour degenerate rates") {
    RateMatrix rates(3);
    rates.at(0, 1) = 1.0;
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const QueueMatrix arrivals = sample_arrivals(rates, rng);
        CHECK(arrivals.at(0, 1) == 1);
        CHECK(arrivals.total() == 1);
    }
}

TEST_CASE("empirical arrival means concentrate on the rates") {
    const int slots = 1000000;
    const RateMatrix rates = uniform_rates(3, 0.9);  // per-cell rate 0.3
    Rng rng(42);
    std::vector<std::int64_t> counts(9, 0);
    std::vector<std::int64_t> buffer(9);
    for (int t = 0; t < slots; ++t) {
        sample_arrivals_into(rates, rng, buffer);
        for (int c = 0; c < 9; ++c) counts[c] += buffer[c];
    }
    const double sigma = std::sqrt(0.3 * 0.7 / slots);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double mean = static_cast<double>(counts[i * 3 + j]) / slots;
            if (i == j)
                CHECK(mean == 0.0);
            else
                CHECK(std::abs(mean - 0.3) < 4.0 * sigma);
        }
    }
}

TEST_CASE("rate matrix validation") {
    CHECK_THROWS_AS(RateMatrix::from_rows({{0.1, 0.2}, {0.2, 0.0}}),
                    std::invalid_argument);  // diagonal must be zero
    CHECK_THROWS_AS(RateMatrix::from_rows({{0.0, 1.2}, {0.2, 0.0}}),
                    std::invalid_argument);  // Bernoulli feasibility
}
