#include <doctest.h>

#include <cmath>

#include "elicit/cover.hpp"
#include "elicit/errors.hpp"

using namespace elicit;

TEST_CASE("interval cover endpoints and spacing") {
    const auto c1 = epsilon_cover_interval(0.0, 1.0, 0.5);
    REQUIRE(c1.size() == 3);
    CHECK(c1[0] == 0.0);
    CHECK(c1[1] == doctest::Approx(0.5));
    CHECK(c1[2] == 1.0);

    const auto c2 = epsilon_cover_interval(0.0, 1.0, 0.1);
    REQUIRE(c2.size() == 11);
    for (std::size_t i = 0; i < c2.size(); ++i) CHECK(c2[i] == doctest::Approx(0.1 * i));

    const auto c3 = epsilon_cover_interval(0.2, 0.8, 1.0);
    CHECK(c3.front() == 0.2);
    CHECK(c3.back() == 0.8);
}

TEST_CASE("interval cover covers") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const double lo = rng.uniform(-2.0, 0.0);
        const double hi = lo + rng.uniform(0.1, 3.0);
        const double eps = rng.uniform(0.01, 0.9);
        const auto cover = epsilon_cover_interval(lo, hi, eps);
        for (int probe = 0; probe < 500; ++probe) {
            const double x = rng.uniform(lo, hi);
            double best = 1e300;
            for (double c : cover) best = std::min(best, std::abs(x - c));
            CHECK(best <= eps + 1e-12);
        }
    }
}

TEST_CASE("simplex cover is a simplex subset and covers in TV") {
    const auto cover = epsilon_cover_simplex(3, 0.1);
    CHECK(cover.size() > 10);
    Rng rng(5);
    for (int probe = 0; probe < 10000; ++probe) {
        const Belief b = sample_belief(3, rng);
        double best = 1e300;
        for (const Belief& c : cover) best = std::min(best, tv_distance(b, c));
        CHECK(best <= 0.1 + 1e-12);
    }
}

TEST_CASE("two-state covers at coarse accuracy") {
    const auto coarse = epsilon_cover_simplex(2, 0.5);
    CHECK(coarse.size() <= 3);
    Rng rng(7);
    for (int probe = 0; probe < 2000; ++probe) {
        const Belief b = sample_belief(2, rng);
        double best = 1e300;
        for (const Belief& c : coarse) best = std::min(best, tv_distance(b, c));
        CHECK(best <= 0.5 + 1e-12);
    }
}

TEST_CASE("cover size cap trips for infeasible accuracy") {
    SimplexCoverOptions opts;
    opts.max_size = 1000;
    CHECK_THROWS_AS(epsilon_cover_simplex(5, 0.01, opts), NumericalDegeneracyError);
}
