#include "elicit/cover_search.hpp"

#include <cmath>
#include <stdexcept>

namespace elicit::cover_search {

namespace {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("cover_search: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

std::vector<double> unit_checked(std::span<const double> theta) {
    const double n = l2_norm(theta);
    if (n < 1e-9) throw std::invalid_argument("assignment_linear: zero type vector");
    std::vector<double> out(theta.begin(), theta.end());
    for (double& x : out) x /= n;
    return out;
}

}  // namespace

AssignmentFunction assignment_euclidean() {
    AssignmentFunction s;
    s.kind = AssignmentKind::EuclideanIdentity;
    s.map = [](std::span<const double> theta) {
        return Outcome(theta.begin(), theta.end());
    };
    s.metric = euclidean_distance;
    s.utility = [](std::span<const double> theta, std::span<const double> outcome) {
        return -euclidean_distance(theta, outcome);
    };
    return s;
}

AssignmentFunction assignment_linear() {
    AssignmentFunction s;
    s.kind = AssignmentKind::LinearTangent;
    s.map = [](std::span<const double> theta) { return unit_checked(theta); };
    s.metric = [](std::span<const double> a, std::span<const double> b) {
        return euclidean_distance(unit_checked(a), unit_checked(b));
    };
    s.utility = [](std::span<const double> theta, std::span<const double> outcome) {
        return dot(theta, outcome);
    };
    return s;
}

TypeCover euclidean_box_cover(double lo, double hi, std::size_t dim, double eps) {
    if (!(lo < hi)) throw std::invalid_argument("euclidean_box_cover: lo < hi required");
    if (dim < 1) throw std::invalid_argument("euclidean_box_cover: dim >= 1 required");
    if (!(eps > 0.0)) throw std::invalid_argument("euclidean_box_cover: eps > 0 required");
    // Per-axis spacing h makes the cell half-diagonal h sqrt(dim)/2 the
    // covering radius; pick h so that it is exactly eps.
    const double h = 2.0 * eps / std::sqrt(static_cast<double>(dim));
    const auto per_axis =
        static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-12)) + 1;
    std::vector<double> axis(per_axis);
    for (std::size_t i = 0; i < per_axis; ++i) {
        axis[i] = per_axis == 1
                      ? 0.5 * (lo + hi)
                      : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(per_axis - 1);
    }
    TypeCover cover;
    cover.radius = eps;
    cover.metric_tag = "euclidean";
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        std::vector<double> p(dim);
        for (std::size_t d = 0; d < dim; ++d) p[d] = axis[idx[d]];
        cover.points.push_back(std::move(p));
        std::size_t d = 0;
        while (d < dim && ++idx[d] == per_axis) {
            idx[d] = 0;
            ++d;
        }
        if (d == dim) break;
    }
    return cover;
}

TypeCover linear_arc_cover(double angle_lo, double angle_hi, double eps) {
    constexpr double pi = 3.14159265358979323846264338327950288;
    if (!(angle_lo < angle_hi)) throw std::invalid_argument("linear_arc_cover: empty arc");
    if (!(angle_hi - angle_lo < pi))
        throw std::invalid_argument("linear_arc_cover: arc must span less than pi");
    if (!(eps > 0.0 && eps < 2.0)) throw std::invalid_argument("linear_arc_cover: bad eps");
    // Chord between angles within delta/2 is 2 sin(delta/4).
    const double delta = 4.0 * std::asin(std::min(0.5 * eps, 1.0));
    const auto count =
        static_cast<std::size_t>(std::ceil((angle_hi - angle_lo) / delta - 1e-12)) + 1;
    TypeCover cover;
    cover.radius = eps;
    cover.metric_tag = "chord";
    for (std::size_t i = 0; i < count; ++i) {
        const double a = count == 1 ? 0.5 * (angle_lo + angle_hi)
                                    : angle_lo + (angle_hi - angle_lo) * static_cast<double>(i) /
                                                     static_cast<double>(count - 1);
        cover.points.push_back({std::cos(a), std::sin(a)});
    }
    return cover;
}

SearchResult exhaustive_search(Strategy& oracle, const TypeCover& cover,
                               const AssignmentFunction& assignment) {
    if (cover.points.empty()) throw std::invalid_argument("exhaustive_search: empty cover");
    SearchResult result;
    History history;
    std::size_t champion = 0;
    Rng unused(0);  // deterministic strategies ignore it; scripted ones too
    for (std::size_t t = 1; t < cover.points.size(); ++t) {
        Query q{assignment.map(cover.points[champion]), assignment.map(cover.points[t])};
        const int answer = oracle.respond(history, q, unused);
        history.push_back(Answered{q, answer});
        result.transcript.queries.push_back(q);
        result.transcript.answers.push_back(answer);
        if (answer == 0) champion = t;
    }
    result.hypothesis = cover.points[champion];
    result.transcript.hypothesis = result.hypothesis;
    result.transcript.final_choice = assignment.map(cover.points[champion]);
    result.queries = cover.points.size() - 1;
    return result;
}

}  // namespace elicit::cover_search
