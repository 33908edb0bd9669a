#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "elicit/framework.hpp"

namespace elicit::cover_search {

enum class AssignmentKind { EuclideanIdentity, LinearTangent };

// One-to-one map from types to outcomes whose induced utility ordering
// mirrors the metric: closer types get strictly preferred outcomes.
struct AssignmentFunction {
    AssignmentKind kind;
    std::function<Outcome(std::span<const double>)> map;  // s(theta)
    std::function<double(std::span<const double>, std::span<const double>)> metric;
    std::function<double(std::span<const double>, std::span<const double>)> utility;
};

// Ideal-point preferences: s is the identity, utility is negated distance
// to the ideal point, and the metric is Euclidean.
AssignmentFunction assignment_euclidean();

// Linear preferences over unit-normalized types: s(theta) is the tangent
// point theta of the indifference hyperplane on the unit sphere, utility
// is the dot product, and the metric is chord distance between tangent
// points. Throws on (near-)zero vectors.
AssignmentFunction assignment_linear();

struct TypeCover {
    std::vector<std::vector<double>> points;
    double radius = 0.0;
    std::string metric_tag;
};

// Axis-aligned grid covering the box [lo, hi]^dim within Euclidean eps.
TypeCover euclidean_box_cover(double lo, double hi, std::size_t dim, double eps);

// Angular grid on the arc [angle_lo, angle_hi] of the unit circle covering
// within chord distance eps. The arc must span less than pi so that no two
// types are scalar multiples of each other.
TypeCover linear_arc_cover(double angle_lo, double angle_hi, double eps);

struct SearchResult {
    std::vector<double> hypothesis;  // champion type
    Transcript transcript;
    std::size_t queries = 0;
};

// Single-elimination pass over the cover: each round queries the current
// champion's outcome against the next candidate's and keeps whichever the
// agent picks. With the left-ties-win answering convention the champion is
// placed on the left, so exact ties keep the incumbent. The final choice
// of the transcript is s(champion), which is also what gets paid.
SearchResult exhaustive_search(Strategy& oracle, const TypeCover& cover,
                               const AssignmentFunction& assignment);

}  // namespace elicit::cover_search
