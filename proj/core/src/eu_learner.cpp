#include "elicit/eu_learner.hpp"

#include <cmath>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit::eu {

std::size_t GroundTruth::draw_state(Rng& rng) const {
    const double u = rng.uniform01();
    double acc = 0.0;
    const std::size_t n = distribution.dimension();
    for (std::size_t i = 0; i < n; ++i) {
        acc += distribution[i];
        if (u < acc) return i;
    }
    return n - 1;
}

std::optional<PlanePoint> interior_point_on_plane(const VersionSpace& H, const UnitVector& v,
                                                  double tol) {
    auto cp = H.plane_center(v, tol);
    if (!cp.has_value()) return std::nullopt;

    // Radial projection keeps every homogeneous constraint satisfied and
    // can only grow the slack, since points of the simplex have norm <= 1.
    std::vector<double> w = cp->point;
    const double norm = l2_norm(w);
    if (norm <= 0.0) return std::nullopt;
    for (double& x : w) x /= norm;
    // Remove the residual plane component so v . w = 0 holds exactly.
    const double drift = dot(v.span(), w);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= drift * v[i];
    UnitVector unit = UnitVector::normalized(std::move(w));

    // Margin measured at the projected point against the cone's facets.
    double margin = 1e300;
    for (std::size_t i = 0; i < unit.dimension(); ++i) margin = std::min(margin, unit[i]);
    for (const Cut& cut : H.cuts()) {
        margin = std::min(margin,
                          static_cast<double>(cut.sign) * dot(cut.normal.span(), unit.span()));
    }
    if (margin < tol) return std::nullopt;
    return PlanePoint{std::move(unit), margin};
}

std::pair<UnitVector, UnitVector> query_points(const PlanePoint& at, const UnitVector& v) {
    const std::size_t n = v.dimension();
    if (at.w.dimension() != n) throw std::invalid_argument("query_points: dimension mismatch");
    const double r = 0.5 * at.margin;
    const double sin_phi = 0.5 * r;
    const double cos_phi = std::sqrt(1.0 - sin_phi * sin_phi);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double base = cos_phi * at.w[i];
        const double step = sin_phi * v[i];
        x[i] = base + step;
        y[i] = base - step;
    }
    return {UnitVector::normalized(std::move(x)), UnitVector::normalized(std::move(y))};
}

BeliefRunResult run_belief_algorithm(Strategy& oracle, std::size_t n, std::size_t rounds,
                                     Rng& rng, const GroundTruth& gt,
                                     const BeliefRunOptions& options) {
    if (gt.distribution.dimension() != n)
        throw std::invalid_argument("run_belief_algorithm: ground truth dimension mismatch");

    VersionSpace space(n);
    Transcript transcript;
    History history;
    std::size_t rejected = 0;

    for (std::size_t t = 0; t < rounds; ++t) {
        std::size_t consecutive = 0;
        while (true) {
            const UnitVector v = sample_unit_sphere(n, rng);
            if (space.hyperplane_intersects(v, options.tol)) {
                const auto at = interior_point_on_plane(space, v, options.tol);
                if (at.has_value()) {
                    auto [x, y] = query_points(*at, v);
                    Query q{x.coords(), y.coords()};
                    const int answer = oracle.respond(history, q, rng);
                    history.push_back(Answered{q, answer});
                    transcript.queries.push_back(q);
                    transcript.answers.push_back(answer);
                    space.add_cut(v, answer == 1 ? 1 : -1);
                    break;
                }
            }
            ++rejected;
            if (++consecutive >= options.resample_cap) {
                throw NumericalDegeneracyError(
                    "run_belief_algorithm: resample cap hit; version space numerically "
                    "degenerate");
            }
        }
    }

    BeliefRunResult result{
        .hypothesis = Belief::uniform(n),
        .transcript = std::move(transcript),
        .space = std::move(space),
    };
    const auto center = result.space.max_margin_center();
    result.hypothesis = Belief::normalized(center.point);
    result.transcript.hypothesis = result.hypothesis.probs();
    result.rejected_directions = rejected;
    result.rounds = rounds;

    if (!result.transcript.queries.empty()) {
        const Query& last = result.transcript.queries.back();
        result.transcript.final_choice =
            result.transcript.answers.back() == 1 ? last.left : last.right;
        result.state_drawn = gt.draw_state(rng);
        result.payment = result.transcript.final_choice[result.state_drawn];
    }
    return result;
}

std::size_t learning_round_budget(std::size_t n, double eps, double c) {
    if (n < 2) throw std::invalid_argument("learning_round_budget: n >= 2 required");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("learning_round_budget: eps in (0,1] required");
    if (!(c > 0.0)) throw std::invalid_argument("learning_round_budget: c > 0 required");
    const double nd = static_cast<double>(n);
    const double raw = c * std::pow(nd, 1.5) * std::log(nd) * std::log(nd / eps);
    return static_cast<std::size_t>(std::ceil(raw - 1e-12));
}

std::size_t ic_round_budget(std::size_t n, double tau, double c) {
    if (!(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("ic_round_budget: tau in (0,1) required");
    const double eps = std::min(static_cast<double>(n) * std::sqrt(tau), 1.0);
    return learning_round_budget(n, eps, c);
}

std::size_t combined_round_budget(std::size_t n, double eps, double tau, double c) {
    return std::max(learning_round_budget(n, eps, c), ic_round_budget(n, tau, c));
}

}  // namespace elicit::eu
