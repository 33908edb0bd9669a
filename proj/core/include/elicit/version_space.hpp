#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "elicit/belief.hpp"

namespace elicit::eu {

// One recorded answer: sign * (normal . beta) >= 0.
struct Cut {
    UnitVector normal;
    int sign;  // +1 or -1
};

// The set of beliefs consistent with every answer so far: the simplex
// intersected with signed homogeneous halfspaces. Geometric questions are
// answered by small LPs in dual form, so cost scales with the dimension
// rather than with the number of cuts.
class VersionSpace {
public:
    explicit VersionSpace(std::size_t n);

    std::size_t dimension() const { return n_; }
    const std::vector<Cut>& cuts() const { return cuts_; }

    void add_cut(const UnitVector& v, int sign);

    // The space rebuilt from only the first `rounds` cuts.
    VersionSpace truncated(std::size_t rounds) const;

    bool contains(std::span<const double> beta, double slack = 0.0) const;

    struct Range {
        bool feasible = false;
        double lo = 0.0;
        double hi = 0.0;
    };
    // Extremes of g . beta over the space with every cut tightened by
    // `shrink` (simplex facets included).
    Range linear_range(std::span<const double> g, double shrink) const;

    // True when the plane {x : v.x = 0} passes through the interior with
    // margin at least tol, decided by whether the two one-sided extremes
    // of v.beta straddle zero.
    bool hyperplane_intersects(const UnitVector& v, double tol) const;

    struct CenterPoint {
        std::vector<double> point;  // on the simplex
        double margin;              // min slack over facets and cuts
    };

    // Point maximizing the minimum slack; the certificate that the space
    // has nonempty interior, and the hypothesis reported after a run.
    CenterPoint max_margin_center() const;

    // Max-margin point additionally constrained to v . beta = 0. Empty when
    // the best margin falls below tol (near-degenerate slice).
    std::optional<CenterPoint> plane_center(const UnitVector& v, double tol) const;

    // Euclidean ball certified to contain the space; refreshed on add_cut
    // and used to discard non-crossing cut directions without any LP.
    struct Ball {
        std::vector<double> center;
        double radius = 0.0;
    };
    const Ball& bounding_ball() const { return ball_; }

    // Per-coordinate extremes (lo, hi); exact interval ends for n = 2.
    std::pair<std::vector<double>, std::vector<double>> bounding_box() const;

private:
    std::optional<CenterPoint> solve_margin(const UnitVector* plane) const;
    void refresh_ball();

    std::size_t n_;
    std::vector<Cut> cuts_;
    Ball ball_;
    std::vector<double> box_lo_;
    std::vector<double> box_hi_;
};

}  // namespace elicit::eu
