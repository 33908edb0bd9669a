#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "elicit/belief.hpp"
#include "elicit/framework.hpp"
#include "elicit/mpl.hpp"
#include "elicit/version_space.hpp"

namespace elicit::audit {

// Worked two-round budget-choice experiment with the factor-2 price
// adjustment: expected payoffs of answering by one's belief versus
// steering the second budget, for a two-state agent with alpha_1 < alpha_2.
struct BudgetsDemoResult {
    double truthful = 0.0;
    double manipulation = 0.0;
    double gain = 0.0;
};
BudgetsDemoResult convex_budgets_demo(const Belief& alpha);

// Bisection over sure amounts i/8 with the payment drawn uniformly over
// the questions asked: a true-CE x_3 agent gains by answering as if the CE
// were x_5. Reproduces both transcripts and their expected payoffs under
// risk-neutral valuation of the sure amounts (the lottery and the CE amount
// are both worth 0.5).
struct UniformPaymentDemo {
    double truthful_payoff = 0.0;
    double deviating_payoff = 0.0;
    std::vector<std::size_t> truthful_questions;   // offer indices asked
    std::vector<std::size_t> deviating_questions;
};
UniformPaymentDemo mpl_uniform_payment_demo();

// Exhaustive best response against the last-question payment scheme.
struct MplBestResponse {
    std::size_t best_index = 0;      // argmax stopping offer
    std::size_t truthful_index = 0;  // first offer at or above the true CE
    double gain = 0.0;               // payoff difference; may underflow to 0
    double log_gain = 0.0;           // log magnitude of the difference
    bool strictly_positive = false;
};
MplBestResponse best_response_mpl(const mpl::UtilityFamily& family, double x_true,
                                  const mpl::Discretization& grid,
                                  const mpl::PaymentSchedule& schedule);

// Candidate deviation classes for the expected-utility mechanisms.
struct StrategyGrid {
    enum class Kind { FixedMisreport, AnswerSequences };
    Kind kind = Kind::FixedMisreport;
    std::vector<Belief> misreports;  // FixedMisreport
    std::size_t depth = 0;           // AnswerSequences; capped at 14
    static constexpr std::size_t kMaxDepth = 14;
};

struct EuBestResponse {
    double max_gain = 0.0;
    double max_gain_se = 0.0;
    std::size_t best_strategy = 0;
    double truthful_mean = 0.0;
    std::vector<double> gains;       // per strategy, mean over paired trials
    std::vector<double> std_errors;  // per strategy
};

// Estimates each strategy's expected final-query payoff under the true
// belief and returns the best gain over truthful play. The same per-trial
// seeds drive every strategy (common random numbers), so estimates are
// paired and deterministic given the master seed.
EuBestResponse best_response_eu(const Belief& alpha, const Learner& mechanism,
                                const StrategyGrid& grid, std::size_t trials,
                                std::uint64_t seed);

// Per-state bisection baseline: queries (e_i, c * ones) over a cover of
// [0, 1] per state, O(n log(n/eps)) questions, accurate for truthful
// agents and deliberately easy to steer.
struct NaiveSearchResult {
    Belief hypothesis;
    Transcript transcript;
    std::size_t queries = 0;
};
NaiveSearchResult naive_statewise_search(Strategy& oracle, std::size_t n, double eps);

// Largest renormalized-L2 distance from `reference` to the hypothesis set,
// measured at the coordinate extremes. Exact for n = 2 (the space is an
// interval); an upper bound from box corners in higher dimension.
double hypothesis_set_radius(const eu::VersionSpace& space, const Belief& reference);

}  // namespace elicit::audit
