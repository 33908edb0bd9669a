#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "elicit/belief.hpp"
#include "elicit/framework.hpp"
#include "elicit/version_space.hpp"

namespace elicit::eu {

// State distribution the analyst samples from to settle payments. Supplied
// by configuration and independent of anything the agent reports.
struct GroundTruth {
    Belief distribution;

    static GroundTruth uniform(std::size_t n) { return GroundTruth{Belief::uniform(n)}; }
    std::size_t draw_state(Rng& rng) const;
};

struct PlanePoint {
    UnitVector w;   // on the sphere, with v . w = 0 to machine precision
    double margin;  // min slack of w against the projected space's facets
};

// Interior point of the sphere projection of H on the plane {x : v.x = 0},
// found by the max-margin LP on the simplex and then projected radially.
// Empty when the slice is too thin to carry the required margin.
std::optional<PlanePoint> interior_point_on_plane(const VersionSpace& H, const UnitVector& v,
                                                  double tol);

// The symmetric query pair around w along +-v, placed on the sphere inside
// the certified ball of radius margin/2. Solving for the pair inside the
// plane spanned by {w, v} keeps x - y exactly parallel to v:
//   x = w cos(phi) + v sin(phi),  y = w cos(phi) - v sin(phi),
// with sin(phi) = margin/4.
std::pair<UnitVector, UnitVector> query_points(const PlanePoint& at, const UnitVector& v);

std::size_t constexpr kDefaultResampleCap = 10'000;

struct BeliefRunOptions {
    double tol = 1e-9;
    std::size_t resample_cap = kDefaultResampleCap;  // consecutive rejected directions
};

struct BeliefRunResult {
    Belief hypothesis;        // max-margin center of the final space
    Transcript transcript;
    VersionSpace space;       // final version space
    double payment = 0.0;     // realized coordinate of the final choice
    std::size_t state_drawn = 0;
    std::size_t rejected_directions = 0;
    std::size_t rounds = 0;
};

// The cutting-plane elicitation loop: sample a direction, keep it only if
// its plane crosses the current space, query the symmetric sphere pair,
// restrict the space by the answer, and after the last round pay the
// agent's preferred vector by simulating a state from the ground truth.
BeliefRunResult run_belief_algorithm(Strategy& oracle, std::size_t n, std::size_t rounds,
                                     Rng& rng, const GroundTruth& gt,
                                     const BeliefRunOptions& options = {});

// Round budget sufficient for learning within total variation eps, with
// a calibration constant standing in for the hidden asymptotic factor:
// ceil(c * n^{3/2} * ln n * ln(n / eps)).
std::size_t learning_round_budget(std::size_t n, double eps, double c);

// Round budget for capping strategic gain at tau: the learning budget at
// accuracy eps = min(n sqrt(tau), 1).
std::size_t ic_round_budget(std::size_t n, double tau, double c);

// Rounds needed for both goals at once.
std::size_t combined_round_budget(std::size_t n, double eps, double tau, double c);

}  // namespace elicit::eu
