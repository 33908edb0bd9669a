#include "elicit/cover.hpp"

#include <cmath>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit {

std::vector<double> epsilon_cover_interval(double lo, double hi, double eps) {
    if (!(lo < hi)) throw std::invalid_argument("epsilon_cover_interval: lo < hi required");
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_cover_interval: eps > 0 required");
    const auto intervals =
        static_cast<std::size_t>(std::ceil((hi - lo) / eps - 1e-12));
    const std::size_t count = std::max<std::size_t>(intervals, 1) + 1;
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    pts.front() = lo;
    pts.back() = hi;
    return pts;
}

namespace {

// C(m+n-1, n-1) without overflow for the sizes we allow.
double composition_count(std::size_t m, std::size_t n) {
    double c = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        c *= static_cast<double>(m + i) / static_cast<double>(i);
        if (c > 1e18) return c;
    }
    return c;
}

void enumerate_compositions(std::size_t remaining, std::size_t parts, std::size_t denominator,
                            std::vector<std::size_t>& prefix, std::vector<Belief>& out) {
    if (parts == 1) {
        prefix.push_back(remaining);
        std::vector<double> probs(prefix.size());
        for (std::size_t i = 0; i < prefix.size(); ++i)
            probs[i] = static_cast<double>(prefix[i]) / static_cast<double>(denominator);
        out.emplace_back(std::move(probs));
        prefix.pop_back();
        return;
    }
    for (std::size_t k = 0; k <= remaining; ++k) {
        prefix.push_back(k);
        enumerate_compositions(remaining - k, parts - 1, denominator, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<Belief> epsilon_cover_simplex(std::size_t n, double eps,
                                          const SimplexCoverOptions& options) {
    if (n < 2) throw std::invalid_argument("epsilon_cover_simplex: n >= 2 required");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("epsilon_cover_simplex: eps in (0,1) required");
    // Largest-remainder rounding onto the lattice moves a point by at most
    // n/(4m) in total variation; m = ceil(n / (2 eps)) leaves a 2x margin.
    const auto m = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) / (2.0 * eps) - 1e-12));
    if (composition_count(m, n) > static_cast<double>(options.max_size)) {
        throw NumericalDegeneracyError(
            "epsilon_cover_simplex: cover size exceeds cap; eps too small for dimension");
    }
    std::vector<Belief> cover;
    std::vector<std::size_t> prefix;
    enumerate_compositions(m, n, m, prefix, cover);
    return cover;
}

}  // namespace elicit
