#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elicit/belief.hpp"
#include "elicit/rng.hpp"

namespace elicit {

// Outcomes are reward vectors; scalar environments embed into dimension 1.
using Outcome = std::vector<double>;

struct Query {
    Outcome left;
    Outcome right;
};

struct Answered {
    Query query;
    int answer;  // 1 = left chosen, 0 = right chosen
};

using History = std::vector<Answered>;

// An answer-generating agent. Implementations may randomize through the
// supplied generator and may keep out-of-band statistics, but respond()
// must be a pure function of (history, query, generator state).
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual int respond(const History& history, const Query& query, Rng& rng) = 0;
    virtual std::string_view name() const { return "strategy"; }
};

using UtilityFn = std::function<double(std::span<const double>)>;

// Answers 1 exactly when u(left) >= u(right); ties go to the left outcome.
// History-independent and deterministic.
class TruthfulStrategy final : public Strategy {
public:
    explicit TruthfulStrategy(UtilityFn utility, std::string name = "truthful",
                              double tie_tol = 1e-10);

    int respond(const History& history, const Query& query, Rng& rng) override;
    std::string_view name() const override { return name_; }

    // Rounds where |u(left) - u(right)| fell below the tie tolerance.
    std::size_t near_ties() const { return near_ties_; }

private:
    UtilityFn utility_;
    std::string name_;
    double tie_tol_;
    std::size_t near_ties_ = 0;
};

// Truthful responder for an expected-utility agent with belief alpha.
std::unique_ptr<TruthfulStrategy> truthful_eu_oracle(const Belief& alpha);

// Plays back a fixed bit string; used for exhaustive deviation searches.
class ScriptedStrategy final : public Strategy {
public:
    explicit ScriptedStrategy(std::vector<int> bits);

    int respond(const History& history, const Query& query, Rng& rng) override;
    std::string_view name() const override { return "scripted"; }

private:
    std::vector<int> bits_;
    std::size_t position_ = 0;
};

// Full record of one mechanism execution.
struct Transcript {
    std::vector<Query> queries;
    std::vector<int> answers;
    Outcome final_choice;            // the agent's pick on the last query
    std::vector<double> hypothesis;  // learned type

    const Query& final_query() const;
    std::size_t rounds() const { return queries.size(); }
};

// A mechanism under evaluation: runs against one agent, spends its own
// randomness, and reports what it learned plus the final-query choice.
struct RunOutcome {
    std::vector<double> hypothesis;
    Outcome final_choice;
    std::size_t queries = 0;
};

using Learner = std::function<RunOutcome(Strategy&, Rng&)>;
using StrategyFactory = std::function<std::unique_ptr<Strategy>()>;
using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

struct EvalReport {
    double success_rate = 0.0;
    double gain_estimate = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double mean_queries = 0.0;
    // Empirical incentive frontier: for each candidate slack tau, the
    // fraction of paired draws where some strategy beat truthful play by
    // more than tau.
    std::vector<std::pair<double, double>> tau_frontier;
    std::vector<double> per_strategy_gain;
    std::vector<double> per_strategy_se;
};

// Success frequency of `learner` against the truthful agent: fraction of
// independent seeded runs with d(theta, hypothesis) <= eps.
EvalReport evaluate_learning(const Learner& learner, std::span<const double> theta,
                             const StrategyFactory& truthful, const Metric& metric,
                             double eps, std::size_t trials, std::uint64_t seed);

// Final-query payoff comparison between truthful play and each candidate
// strategy. Truthful and deviating executions are drawn independently and
// paired by trial index.
EvalReport evaluate_ic(const Learner& learner, const UtilityFn& true_utility,
                       const StrategyFactory& truthful,
                       const std::vector<StrategyFactory>& strategies,
                       std::size_t trials, std::uint64_t seed);

}  // namespace elicit
