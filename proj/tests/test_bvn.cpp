#include "doctest.h"

#include "optsched/bvn.hpp"
#include "optsched/rng.hpp"

using namespace optsched;

TEST_CASE("sinkhorn keeps a doubly stochastic input") {
    const WeightGrid half = WeightGrid::from_rows({{0.5, 0.5}, {0.5, 0.5}});
    const StochasticMatrix scaled = sinkhorn_scale(half);
    CHECK(scaled.line_sum_residual() < 1e-9);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(scaled.at(i, j) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("sinkhorn on a permutation-supported queue matrix") {
    const QueueMatrix queues = QueueMatrix::from_rows({{0, 1}, {1, 0}});
    const StochasticMatrix scaled = sinkhorn_scale(queues);
    CHECK(scaled.line_sum_residual() < 1e-9);
    CHECK(scaled.at(0, 1) > 0.999);
    CHECK(scaled.at(1, 0) > 0.999);
    CHECK(scaled.at(0, 0) < 1e-3);
    CHECK(scaled.at(0, 0) == doctest::Approx(scaled.at(1, 1)).epsilon(1e-6));
}

TEST_CASE("sinkhorn turns the zero matrix into the uniform one") {
    const StochasticMatrix scaled = sinkhorn_scale(QueueMatrix(4));
    CHECK(scaled.line_sum_residual() < 1e-9);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(scaled.at(i, j) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("sinkhorn reports non-convergence with the residual") {
    const WeightGrid grid = WeightGrid::from_rows({{5, 1, 0}, {0, 2, 9}, {3, 0, 1}});
    try {
        sinkhorn_scale(grid, 1e-15, 1);
        FAIL("expected SinkhornError");
    } catch (const SinkhornError& err) {
        CHECK(err.residual > 0.0);
        CHECK(err.iterations == 1);
    }
}

TEST_CASE("decomposing a permutation matrix yields one term") {
    StochasticMatrix perm(3);
    perm.at(0, 2) = 1.0;
    perm.at(1, 0) = 1.0;
    perm.at(2, 1) = 1.0;
    const BvnDecomposition d = birkhoff_decompose(perm);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].alpha == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.terms[0].schedule.dst_of(0) == 2);
}

TEST_CASE("hand-peelable 3x3 decomposition") {
    const StochasticMatrix b = StochasticMatrix::from_rows(
        {{0.6, 0.4, 0.0}, {0.0, 0.6, 0.4}, {0.4, 0.0, 0.6}});
    const BvnDecomposition d = birkhoff_decompose(b);
    REQUIRE(d.terms.size() == 2);
    // The support admits exactly two permutations: the identity at 0.6 and
    // the 3-cycle at 0.4, in either extraction order.
    const Schedule identity = Schedule::identity(3);
    const Schedule cycle = Schedule::from_permutation({1, 2, 0});
    for (const BvnTerm& term : d.terms) {
        if (term.schedule == identity)
            CHECK(term.alpha == doctest::Approx(0.6).epsilon(1e-9));
        else if (term.schedule == cycle)
            CHECK(term.alpha == doctest::Approx(0.4).epsilon(1e-9));
        else
            FAIL("unexpected permutation in the decomposition");
    }
    CHECK(d.reconstruction_error(b) < 1e-9);
}

TEST_CASE("decomposition invariants on random scaled matrices") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6;
        QueueMatrix queues(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) queues.set(i, j, rng.below(100));
        const StochasticMatrix b = sinkhorn_scale(queues);
        const BvnDecomposition d = birkhoff_decompose(b);
        CHECK(d.coefficient_sum() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(d.reconstruction_error(b) < 1e-8);
        CHECK(static_cast<int>(d.terms.size()) <= n * n - 2 * n + 2);
        for (const BvnTerm& term : d.terms) {
            CHECK(term.alpha > 0.0);
            CHECK(term.schedule.full());
        }
    }
}

TEST_CASE("decompose rejects a matrix without a perfect matching structure") {
    const StochasticMatrix broken = StochasticMatrix::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    CHECK_THROWS_AS(birkhoff_decompose(broken), std::runtime_error);
}

TEST_CASE("top_q keeps the largest terms and renormalizes") {
    BvnDecomposition d;
    d.terms.push_back({0.5, Schedule::identity(3)});
    d.terms.push_back({0.3, Schedule::from_permutation({1, 2, 0})});
    d.terms.push_back({0.2, Schedule::from_permutation({2, 0, 1})});

    const BvnDecomposition two = top_q(d, 2);
    REQUIRE(two.terms.size() == 2);
    CHECK(two.terms[0].alpha == doctest::Approx(0.625));
    CHECK(two.terms[1].alpha == doctest::Approx(0.375));

    const BvnDecomposition all = top_q(d, 7);
    REQUIRE(all.terms.size() == 3);
    CHECK(all.coefficient_sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(all.terms[0].alpha == doctest::Approx(0.5));

    BvnDecomposition single;
    single.terms.push_back({1.0, Schedule::identity(2)});
    const BvnDecomposition same = top_q(single, 1);
    REQUIRE(same.terms.size() == 1);
    CHECK(same.terms[0].alpha == doctest::Approx(1.0));

    CHECK_THROWS_AS(top_q(d, 0), std::invalid_argument);
}
