#include "elicit/framework.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elicit {

TruthfulStrategy::TruthfulStrategy(UtilityFn utility, std::string name, double tie_tol)
    : utility_(std::move(utility)), name_(std::move(name)), tie_tol_(tie_tol) {
    if (!utility_) throw std::invalid_argument("TruthfulStrategy: missing utility");
}

int TruthfulStrategy::respond(const History&, const Query& query, Rng&) {
    const double ul = utility_(query.left);
    const double ur = utility_(query.right);
    if (std::abs(ul - ur) <= tie_tol_) ++near_ties_;
    return ul >= ur ? 1 : 0;
}

std::unique_ptr<TruthfulStrategy> truthful_eu_oracle(const Belief& alpha) {
    std::vector<double> probs = alpha.probs();
    return std::make_unique<TruthfulStrategy>(
        [probs = std::move(probs)](std::span<const double> outcome) {
            return dot(probs, outcome);
        },
        "truthful");
}

ScriptedStrategy::ScriptedStrategy(std::vector<int> bits) : bits_(std::move(bits)) {
    for (int b : bits_) {
        if (b != 0 && b != 1) throw std::invalid_argument("ScriptedStrategy: bits must be 0/1");
    }
}

int ScriptedStrategy::respond(const History&, const Query&, Rng&) {
    if (position_ >= bits_.size())
        throw std::out_of_range("ScriptedStrategy: script exhausted");
    return bits_[position_++];
}

const Query& Transcript::final_query() const {
    if (queries.empty()) throw std::out_of_range("Transcript: no queries");
    return queries.back();
}

EvalReport evaluate_learning(const Learner& learner, std::span<const double> theta,
                             const StrategyFactory& truthful, const Metric& metric,
                             double eps, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("evaluate_learning: trials >= 1 required");
    EvalReport report;
    report.trials = trials;
    report.seed = seed;
    const Rng base(seed);
    std::size_t successes = 0;
    double total_queries = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = base.derive(t);
        auto agent = truthful();
        const RunOutcome out = learner(*agent, rng);
        if (metric(theta, out.hypothesis) <= eps) ++successes;
        total_queries += static_cast<double>(out.queries);
    }
    report.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
    report.mean_queries = total_queries / static_cast<double>(trials);
    return report;
}

EvalReport evaluate_ic(const Learner& learner, const UtilityFn& true_utility,
                       const StrategyFactory& truthful,
                       const std::vector<StrategyFactory>& strategies,
                       std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("evaluate_ic: trials >= 1 required");
    EvalReport report;
    report.trials = trials;
    report.seed = seed;
    const Rng base(seed);

    // Stream 0 feeds the truthful executions; stream s+1 feeds strategy s.
    // Each stream is independent, matching the definition's independent
    // executions; pairing is by trial index.
    std::vector<double> truthful_payoff(trials);
    double total_queries = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = base.derive(t);
        auto agent = truthful();
        const RunOutcome out = learner(*agent, rng);
        truthful_payoff[t] = true_utility(out.final_choice);
        total_queries += static_cast<double>(out.queries);
    }
    report.mean_queries = total_queries / static_cast<double>(trials);

    std::vector<std::vector<double>> gains(strategies.size());
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        gains[s].resize(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            Rng rng = base.derive((s + 1) * 0x10000000ull + t);
            auto agent = strategies[s]();
            const RunOutcome out = learner(*agent, rng);
            gains[s][t] = true_utility(out.final_choice) - truthful_payoff[t];
        }
    }

    report.per_strategy_gain.resize(strategies.size(), 0.0);
    report.per_strategy_se.resize(strategies.size(), 0.0);
    double max_gain = strategies.empty() ? 0.0 : -1e300;
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        double mean = 0.0;
        for (double g : gains[s]) mean += g;
        mean /= static_cast<double>(trials);
        double var = 0.0;
        for (double g : gains[s]) var += (g - mean) * (g - mean);
        var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
        report.per_strategy_gain[s] = mean;
        report.per_strategy_se[s] = std::sqrt(var / static_cast<double>(trials));
        max_gain = std::max(max_gain, mean);
    }
    report.gain_estimate = strategies.empty() ? 0.0 : max_gain;

    // Violation frequencies over a small grid of slack values.
    std::vector<double> taus = {0.0,  0.001, 0.002, 0.005, 0.01, 0.02,
                                0.05, 0.1,   0.2,   0.5};
    for (double tau : taus) {
        double worst = 0.0;
        for (const auto& g : gains) {
            std::size_t violations = 0;
            for (double gi : g) {
                if (gi > tau) ++violations;
            }
            worst = std::max(worst,
                             static_cast<double>(violations) / static_cast<double>(trials));
        }
        report.tau_frontier.emplace_back(tau, worst);
    }
    return report;
}

}  // namespace elicit
