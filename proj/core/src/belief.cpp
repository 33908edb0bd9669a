#include "elicit/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "elicit/tolerances.hpp"

namespace elicit {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

namespace {

void require_same_dimension(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("belief: dimension mismatch");
}

double clamped_unit_dot(std::span<const double> a, std::span<const double> b) {
    return std::clamp(dot(a, b), -1.0, 1.0);
}

}  // namespace

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) throw std::invalid_argument("Belief: need at least 2 states");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw std::invalid_argument("Belief: negative entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > default_tolerances().algebraic)
        throw std::invalid_argument("Belief: entries must sum to 1");
}

Belief Belief::uniform(std::size_t n) {
    if (n < 2) throw std::invalid_argument("Belief: need at least 2 states");
    return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Belief Belief::normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("Belief: negative weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("Belief: weights sum to zero");
    for (double& w : weights) w /= sum;
    return Belief(std::move(weights));
}

double Belief::norm() const { return l2_norm(probs_); }

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("UnitVector: empty");
    if (std::abs(l2_norm(coords_) - 1.0) > default_tolerances().algebraic)
        throw std::invalid_argument("UnitVector: norm must be 1");
}

UnitVector UnitVector::normalized(std::vector<double> coords) {
    const double n = l2_norm(coords);
    if (n <= 0.0) throw std::invalid_argument("UnitVector: zero vector");
    for (double& c : coords) c /= n;
    // One more pass irons out rounding from the division.
    const double n2 = l2_norm(coords);
    for (double& c : coords) c /= n2;
    return UnitVector(std::move(coords));
}

UnitVector project_to_sphere(const Belief& alpha) {
    return UnitVector::normalized(alpha.probs());
}

double tv_distance(const Belief& alpha, const Belief& beta) {
    require_same_dimension(alpha.dimension(), beta.dimension());
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.dimension(); ++i) s += std::abs(alpha[i] - beta[i]);
    return 0.5 * s;
}

double renorm_l2(const Belief& alpha, const Belief& beta) {
    require_same_dimension(alpha.dimension(), beta.dimension());
    const UnitVector a = project_to_sphere(alpha);
    const UnitVector b = project_to_sphere(beta);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double angular_error(const Belief& alpha, const Belief& beta) {
    require_same_dimension(alpha.dimension(), beta.dimension());
    const UnitVector a = project_to_sphere(alpha);
    const UnitVector b = project_to_sphere(beta);
    constexpr double pi = 3.14159265358979323846264338327950288;
    return std::acos(clamped_unit_dot(a.span(), b.span())) / pi;
}

double spherical_score(const Belief& beta, std::size_t state) {
    if (state >= beta.dimension()) throw std::out_of_range("spherical_score: state index");
    return beta[state] / beta.norm();
}

double expected_spherical_score(const Belief& alpha, const Belief& beta) {
    require_same_dimension(alpha.dimension(), beta.dimension());
    const double bn = beta.norm();
    double s = 0.0;
    for (std::size_t i = 0; i < alpha.dimension(); ++i) s += alpha[i] * beta[i] / bn;
    return s;
}

UnitVector sample_unit_sphere(std::size_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_unit_sphere: n >= 2 required");
    std::vector<double> v(n);
    while (true) {
        for (double& x : v) x = rng.gaussian();
        if (l2_norm(v) > 1e-8) break;  // astronomically rare rejection
    }
    return UnitVector::normalized(std::move(v));
}

Belief sample_belief(std::size_t n, Rng& rng) {
    if (n < 2) throw std::invalid_argument("sample_belief: n >= 2 required");
    // Exponential spacings give the flat Dirichlet.
    std::vector<double> w(n);
    for (double& x : w) {
        double u = rng.uniform01();
        if (u <= 0.0) u = 0x1.0p-53;
        x = -std::log(u);
    }
    return Belief::normalized(std::move(w));
}

}  // namespace elicit
