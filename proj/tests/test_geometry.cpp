#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "elicit/belief.hpp"

using namespace elicit;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("belief invariants are enforced") {
    CHECK_THROWS_AS(Belief({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Belief({0.6, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(Belief({-0.1, 1.1}), std::invalid_argument);
    CHECK_NOTHROW(Belief({0.25, 0.75}));
    CHECK(Belief::normalized({2.0, 2.0})[0] == doctest::Approx(0.5));
}

TEST_CASE("projection onto the sphere") {
    const Belief degenerate({1.0, 0.0});
    const UnitVector u = project_to_sphere(degenerate);
    CHECK(u[0] == doctest::Approx(1.0));
    CHECK(u[1] == doctest::Approx(0.0));

    const UnitVector half = project_to_sphere(Belief({0.5, 0.5}));
    CHECK(half[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const Belief b({0.2, 0.3, 0.5});
    const UnitVector v = project_to_sphere(b);
    const double norm = std::sqrt(0.38);
    CHECK(v[0] == doctest::Approx(0.2 / norm).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(0.3 / norm).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(0.5 / norm).epsilon(1e-12));

    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const Belief r = sample_belief(2 + i % 4, rng);
        CHECK(std::abs(l2_norm(project_to_sphere(r).span()) - 1.0) <= 1e-12);
    }
}

TEST_CASE("total variation distance") {
    CHECK(tv_distance(Belief({1.0, 0.0}), Belief({0.0, 1.0})) == doctest::Approx(1.0));
    const Belief a({0.3, 0.7});
    CHECK(tv_distance(a, a) == doctest::Approx(0.0));
    CHECK(tv_distance(Belief({0.2, 0.8}), Belief({0.5, 0.5})) == doctest::Approx(0.3));
    CHECK_THROWS_AS(tv_distance(Belief({0.5, 0.5}), Belief({0.2, 0.3, 0.5})),
                    std::invalid_argument);
}

TEST_CASE("renormalized L2 distance") {
    const Belief a({0.4, 0.6});
    CHECK(renorm_l2(a, a) == doctest::Approx(0.0));
    CHECK(renorm_l2(Belief({1.0, 0.0}), Belief({0.0, 1.0})) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(renorm_l2(Belief({0.5, 0.5}), Belief({1.0, 0.0})) ==
          doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("angular error closed form") {
    const Belief a({0.25, 0.75});
    CHECK(angular_error(a, a) == doctest::Approx(0.0));
    CHECK(angular_error(Belief({1.0, 0.0}), Belief({0.0, 1.0})) == doctest::Approx(0.5));
    CHECK(angular_error(Belief({0.5, 0.5}), Belief({1.0, 0.0})) == doctest::Approx(0.25));
}

TEST_CASE("renorm identity: squared distance equals 2 - 2 cos(angle)") {
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 2 + i % 4;
        const Belief a = sample_belief(n, rng);
        const Belief b = sample_belief(n, rng);
        const double d = renorm_l2(a, b);
        const double angle = kPi * angular_error(a, b);
        CHECK(std::abs(d * d - (2.0 - 2.0 * std::cos(angle))) <= 1e-10);
    }
}

TEST_CASE("angular error matches the sign-disagreement frequency") {
    Rng rng(23);
    for (int pair = 0; pair < 20; ++pair) {
        const std::size_t n = 2 + pair % 3;
        const Belief a = sample_belief(n, rng);
        const Belief b = sample_belief(n, rng);
        const double closed = angular_error(a, b);
        const int draws = 100000;
        int disagree = 0;
        for (int i = 0; i < draws; ++i) {
            const UnitVector v = sample_unit_sphere(n, rng);
            const double va = dot(v.span(), a.span());
            const double vb = dot(v.span(), b.span());
            if ((va >= 0.0) != (vb >= 0.0)) ++disagree;
        }
        const double mc = static_cast<double>(disagree) / draws;
        const double se = std::sqrt(std::max(closed * (1.0 - closed), 1e-6) / draws);
        CHECK(std::abs(mc - closed) <= 3.0 * se + 1e-4);
    }
}

TEST_CASE("spherical score coordinates") {
    CHECK(spherical_score(Belief({1.0, 0.0}), 0) == doctest::Approx(1.0));
    CHECK(spherical_score(Belief({0.5, 0.5}), 1) == doctest::Approx(std::sqrt(0.5)));
    CHECK(spherical_score(Belief({0.2, 0.3, 0.5}), 2) ==
          doctest::Approx(0.5 / std::sqrt(0.38)).epsilon(1e-12));
    CHECK_THROWS_AS(spherical_score(Belief({0.5, 0.5}), 2), std::out_of_range);
}

TEST_CASE("expected spherical score values") {
    const Belief half({0.5, 0.5});
    CHECK(expected_spherical_score(half, half) == doctest::Approx(std::sqrt(0.5)));
    CHECK(expected_spherical_score(Belief({1.0, 0.0}), Belief({0.0, 1.0})) ==
          doctest::Approx(0.0));
    CHECK(expected_spherical_score(Belief({0.3, 0.7}), half) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("expected score equals norm times cosine") {
    Rng rng(31);
    for (int i = 0; i < 2000; ++i) {
        const Belief a = sample_belief(3, rng);
        const Belief b = sample_belief(3, rng);
        const double angle = kPi * angular_error(a, b);
        CHECK(expected_spherical_score(a, b) ==
              doctest::Approx(a.norm() * std::cos(angle)).epsilon(1e-9));
    }
}

TEST_CASE("scoring rule effectiveness: score order mirrors distance order") {
    Rng rng(37);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = 2 + i % 3;
        const Belief a = sample_belief(n, rng);
        const Belief b = sample_belief(n, rng);
        const Belief c = sample_belief(n, rng);
        const double sb = expected_spherical_score(a, b);
        const double sc = expected_spherical_score(a, c);
        const double db = renorm_l2(a, b);
        const double dc = renorm_l2(a, c);
        if (std::abs(sb - sc) <= 1e-12 || std::abs(db - dc) <= 1e-12) continue;
        CHECK((sb > sc) == (db < dc));
        ++checked;
    }
    CHECK(checked > 9000);
}

TEST_CASE("score drop is bounded by half the squared renorm distance") {
    Rng rng(41);
    for (int i = 0; i < 10000; ++i) {
        const std::size_t n = 2 + i % 3;
        const Belief a = sample_belief(n, rng);
        const Belief b = sample_belief(n, rng);
        const double lambda = renorm_l2(a, b);
        CHECK(expected_spherical_score(a, b) >=
              expected_spherical_score(a, a) - 0.5 * lambda * lambda - 1e-12);
    }
}

TEST_CASE("expected score is maximized at the true belief on any grid") {
    Rng rng(43);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rep % 3;
        const Belief truth = sample_belief(n, rng);
        std::vector<Belief> grid;
        for (int i = 0; i < 40; ++i) grid.push_back(sample_belief(n, rng));
        grid.push_back(truth);
        const double best = expected_spherical_score(truth, truth);
        for (const Belief& candidate : grid) {
            CHECK(expected_spherical_score(truth, candidate) <= best + 1e-12);
        }
    }
}

TEST_CASE("unit sphere sampling is uniform") {
    SUBCASE("norms are exactly one") {
        Rng rng(47);
        for (int i = 0; i < 1000; ++i) {
            const UnitVector v = sample_unit_sphere(2 + i % 5, rng);
            CHECK(std::abs(l2_norm(v.span()) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("planar angles pass a Kolmogorov-Smirnov test") {
        Rng rng(53);
        const int draws = 100000;
        std::vector<double> angles(draws);
        for (int i = 0; i < draws; ++i) {
            const UnitVector v = sample_unit_sphere(2, rng);
            double a = std::atan2(v[1], v[0]);
            if (a < 0.0) a += 2.0 * kPi;
            angles[i] = a / (2.0 * kPi);
        }
        std::sort(angles.begin(), angles.end());
        double ks = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double lo = static_cast<double>(i) / draws;
            const double hi = static_cast<double>(i + 1) / draws;
            ks = std::max(ks, std::max(std::abs(angles[i] - lo), std::abs(angles[i] - hi)));
        }
        // 1% critical value for the one-sample KS statistic.
        CHECK(ks < 1.63 / std::sqrt(static_cast<double>(draws)));
    }
    SUBCASE("coordinate means vanish") {
        Rng rng(59);
        const int draws = 100000;
        std::vector<double> mean(3, 0.0);
        for (int i = 0; i < draws; ++i) {
            const UnitVector v = sample_unit_sphere(3, rng);
            for (int d = 0; d < 3; ++d) mean[d] += v[d];
        }
        for (int d = 0; d < 3; ++d) CHECK(std::abs(mean[d] / draws) < 0.01);
    }
}
