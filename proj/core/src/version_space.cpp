#include "elicit/version_space.hpp"

#include <cmath>
#include <stdexcept>

#include "elicit/errors.hpp"
#include "elicit/linprog.hpp"
#include "elicit/tolerances.hpp"

namespace elicit::eu {

namespace {

constexpr double kSolverTol = 1e-9;

double signed_row(const Cut& cut, std::size_t i) {
    return static_cast<double>(cut.sign) * cut.normal[i];
}

}  // namespace

VersionSpace::VersionSpace(std::size_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("VersionSpace: dimension >= 2 required");
    refresh_ball();
}

void VersionSpace::add_cut(const UnitVector& v, int sign) {
    if (v.dimension() != n_) throw std::invalid_argument("VersionSpace: cut dimension mismatch");
    if (sign != 1 && sign != -1) throw std::invalid_argument("VersionSpace: sign must be +-1");
    cuts_.push_back(Cut{v, sign});
    refresh_ball();
}

VersionSpace VersionSpace::truncated(std::size_t rounds) const {
    VersionSpace out(n_);
    const std::size_t keep = std::min(rounds, cuts_.size());
    for (std::size_t k = 0; k < keep; ++k) out.add_cut(cuts_[k].normal, cuts_[k].sign);
    return out;
}

bool VersionSpace::contains(std::span<const double> beta, double slack) const {
    if (beta.size() != n_) throw std::invalid_argument("VersionSpace: point dimension mismatch");
    double sum = 0.0;
    for (double b : beta) {
        if (b < -slack - 1e-12) return false;
        sum += b;
    }
    if (std::abs(sum - 1.0) > 1e-9) return false;
    for (const Cut& cut : cuts_) {
        if (static_cast<double>(cut.sign) * dot(cut.normal.span(), beta) < -slack - 1e-12)
            return false;
    }
    return true;
}

// Extremes of g.beta are computed through the LP dual, which has only n
// rows regardless of how many cuts have accumulated:
//   primal:  max g.b  s.t.  sum b = 1,  (sign_k v_k).b >= shrink,  b >= 0
//   dual:    min over (mu >= 0, z free) of ... , solved in standard form
// with columns [mu | z+ | z- | slack]. The standard-form optimum equals
// max g.b directly; an unbounded dual certifies an empty shrunken space.
VersionSpace::Range VersionSpace::linear_range(std::span<const double> g, double shrink) const {
    if (g.size() != n_) throw std::invalid_argument("VersionSpace: objective dimension mismatch");
    const std::size_t m = cuts_.size();
    const std::size_t cols = m + 2 + n_;

    const auto solve_max = [&](bool negate) -> std::optional<double> {
        std::vector<std::vector<double>> A(n_, std::vector<double>(cols, 0.0));
        std::vector<double> b(n_);
        std::vector<double> cost(cols, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < m; ++k) A[i][k] = signed_row(cuts_[k], i);
            A[i][m] = 1.0;
            A[i][m + 1] = -1.0;
            A[i][m + 2 + i] = 1.0;
            b[i] = negate ? g[i] : -g[i];
        }
        for (std::size_t k = 0; k < m; ++k) cost[k] = -shrink;
        cost[m] = -1.0;
        cost[m + 1] = 1.0;
        const lp::Solution sol = lp::solve_standard(A, b, cost, kSolverTol);
        if (sol.status == lp::Status::Unbounded) return std::nullopt;  // empty space
        if (sol.status != lp::Status::Optimal)
            throw NumericalDegeneracyError("VersionSpace: range LP failed");
        return sol.value;
    };

    Range range;
    const auto hi = solve_max(false);
    if (!hi.has_value()) return range;
    const auto lo = solve_max(true);
    if (!lo.has_value()) return range;
    range.feasible = true;
    range.hi = *hi;
    range.lo = -*lo;
    return range;
}

bool VersionSpace::hyperplane_intersects(const UnitVector& v, double tol) const {
    if (v.dimension() != n_) throw std::invalid_argument("VersionSpace: dimension mismatch");
    // A plane farther from the bounding ball's center than its radius
    // cannot touch the space.
    const double d = std::abs(dot(v.span(), ball_.center));
    if (d > ball_.radius) return false;
    const Range r = linear_range(v.span(), tol);
    if (!r.feasible) return false;
    return r.hi > tol && r.lo < -tol;
}

// Max-margin point, optionally restricted to the slice v.beta = 0. Solved
// through the dual so the tableau keeps n+1 rows; the primal (beta, margin)
// is read back from the row multipliers and re-validated directly.
std::optional<VersionSpace::CenterPoint> VersionSpace::solve_margin(const UnitVector* plane) const {
    const std::size_t m = cuts_.size();
    const bool with_plane = plane != nullptr;
    const std::size_t rows = n_ + 1;
    const std::size_t zcols = with_plane ? 4 : 2;
    const std::size_t cols = n_ + m + zcols + rows;

    std::vector<std::vector<double>> A(rows, std::vector<double>(cols, 0.0));
    std::vector<double> b(rows, 0.0);
    std::vector<double> cost(cols, 0.0);

    for (std::size_t i = 0; i < n_; ++i) {
        A[i][i] = 1.0;  // orthant margin multiplier
        for (std::size_t k = 0; k < m; ++k) A[i][n_ + k] = signed_row(cuts_[k], i);
        A[i][n_ + m] = 1.0;       // z1+
        A[i][n_ + m + 1] = -1.0;  // z1-
        if (with_plane) {
            A[i][n_ + m + 2] = (*plane)[i];
            A[i][n_ + m + 3] = -(*plane)[i];
        }
        A[i][n_ + m + zcols + i] = 1.0;  // slack
    }
    for (std::size_t j = 0; j < n_ + m; ++j) A[n_][j] = -1.0;
    A[n_][n_ + m + zcols + n_] = 1.0;  // slack of the margin row
    b[n_] = -1.0;
    cost[n_ + m] = -1.0;
    cost[n_ + m + 1] = 1.0;

    const lp::Solution sol = lp::solve_standard(A, b, cost, kSolverTol);
    if (sol.status == lp::Status::Infeasible)
        throw NumericalDegeneracyError("VersionSpace: margin LP infeasible (space empty)");
    if (sol.status != lp::Status::Optimal) return std::nullopt;

    CenterPoint cp;
    cp.point.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) cp.point[i] = -sol.duals[i];
    cp.margin = -sol.duals[n_];

    // Re-validate the recovered primal; any drift here means the LP gave
    // us a multiplier vector we cannot trust.
    double sum = 0.0;
    double direct_margin = 1e300;
    for (std::size_t i = 0; i < n_; ++i) {
        sum += cp.point[i];
        direct_margin = std::min(direct_margin, cp.point[i]);
    }
    for (std::size_t k = 0; k < m; ++k)
        direct_margin = std::min(direct_margin,
                                 static_cast<double>(cuts_[k].sign) *
                                     dot(cuts_[k].normal.span(), cp.point));
    if (std::abs(sum - 1.0) > 1e-7)
        throw NumericalDegeneracyError("VersionSpace: margin LP primal recovery drifted");
    if (with_plane && std::abs(dot(plane->span(), cp.point)) > 1e-7)
        throw NumericalDegeneracyError("VersionSpace: plane constraint violated in recovery");
    if (std::abs(direct_margin - cp.margin) > 1e-6)
        throw NumericalDegeneracyError("VersionSpace: margin recovery mismatch");
    cp.margin = direct_margin;
    return cp;
}

VersionSpace::CenterPoint VersionSpace::max_margin_center() const {
    auto cp = solve_margin(nullptr);
    if (!cp.has_value())
        throw NumericalDegeneracyError("VersionSpace: max-margin LP did not solve");
    return *cp;
}

std::optional<VersionSpace::CenterPoint> VersionSpace::plane_center(const UnitVector& v,
                                                                    double tol) const {
    if (v.dimension() != n_) throw std::invalid_argument("VersionSpace: dimension mismatch");
    auto cp = solve_margin(&v);
    if (!cp.has_value()) return std::nullopt;
    if (cp->margin < tol) return std::nullopt;
    return cp;
}

std::pair<std::vector<double>, std::vector<double>> VersionSpace::bounding_box() const {
    return {box_lo_, box_hi_};
}

void VersionSpace::refresh_ball() {
    box_lo_.assign(n_, 0.0);
    box_hi_.assign(n_, 0.0);
    std::vector<double> g(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        g[i] = 1.0;
        const Range r = linear_range(g, 0.0);
        g[i] = 0.0;
        if (!r.feasible)
            throw NumericalDegeneracyError("VersionSpace: became empty, inconsistent cuts");
        box_lo_[i] = r.lo;
        box_hi_[i] = r.hi;
    }
    ball_.center.resize(n_);
    double rr = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        ball_.center[i] = 0.5 * (box_lo_[i] + box_hi_[i]);
        const double half = 0.5 * (box_hi_[i] - box_lo_[i]);
        rr += half * half;
    }
    ball_.radius = std::sqrt(rr) + 1e-12;
}

}  // namespace elicit::eu
