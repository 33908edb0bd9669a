#pragma once

#include <cstddef>
#include <vector>

#include "elicit/belief.hpp"

namespace elicit {

// Equally spaced grid over [lo, hi] including both endpoints, with
// ceil((hi - lo) / eps) intervals. Every point of [lo, hi] is within
// eps/2 of some grid point, so the covering requirement holds with slack.
std::vector<double> epsilon_cover_interval(double lo, double hi, double eps);

struct SimplexCoverOptions {
    // Hard cap on cover cardinality. Exceeding it signals an infeasible
    // eps for the given dimension, not an implementation limit.
    std::size_t max_size = 2'000'000;
};

// Lattice of integer compositions k/m with sum(k) = m. The denominator is
// chosen so that largest-remainder rounding lands every point of the
// simplex within total variation eps of the lattice.
std::vector<Belief> epsilon_cover_simplex(std::size_t n, double eps,
                                          const SimplexCoverOptions& options = {});

}  // namespace elicit
