#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elicit/rng.hpp"

namespace elicit {

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

// Probability vector on n >= 2 states: entries non-negative, sum 1 within
// 1e-12. Immutable after construction.
class Belief {
public:
    explicit Belief(std::vector<double> probs);

    static Belief uniform(std::size_t n);
    // Scales a non-negative weight vector to sum 1.
    static Belief normalized(std::vector<double> weights);

    std::size_t dimension() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    std::span<const double> span() const { return probs_; }
    double norm() const;  // Euclidean length, in [1/sqrt(n), 1]

private:
    std::vector<double> probs_;
};

// Point on the unit sphere: Euclidean norm 1 within 1e-12.
class UnitVector {
public:
    explicit UnitVector(std::vector<double> coords);

    static UnitVector normalized(std::vector<double> coords);

    std::size_t dimension() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }
    std::span<const double> span() const { return coords_; }

private:
    std::vector<double> coords_;
};

// Radial projection onto the unit sphere, beta / ||beta||.
UnitVector project_to_sphere(const Belief& alpha);

// Half the L1 distance between probability vectors; in [0, 1].
double tv_distance(const Belief& alpha, const Belief& beta);

// Euclidean distance between the sphere projections; in [0, 2].
double renorm_l2(const Belief& alpha, const Belief& beta);

// arccos of the projected dot product, divided by pi. Equals the
// probability that a uniformly random direction separates the two
// vectors by sign. Dot products are clamped to [-1, 1] before arccos.
double angular_error(const Belief& alpha, const Belief& beta);

// Score of report beta when state `state` (0-based) is realized:
// the state's coordinate of the sphere projection of beta.
double spherical_score(const Belief& beta, std::size_t state);

// Expectation of spherical_score(beta, i) under i ~ alpha. Equals
// ||alpha|| cos(alpha, beta); uniquely maximized over beta at alpha.
double expected_spherical_score(const Belief& alpha, const Belief& beta);

// Uniform draw from the unit sphere: normalized independent gaussians.
UnitVector sample_unit_sphere(std::size_t n, Rng& rng);

// Uniform draw from the probability simplex.
Belief sample_belief(std::size_t n, Rng& rng);

}  // namespace elicit
