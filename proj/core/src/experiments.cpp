#include "elicit/experiments.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "elicit/audit.hpp"
#include "elicit/belief.hpp"
#include "elicit/cover_search.hpp"
#include "elicit/errors.hpp"
#include "elicit/eu_learner.hpp"
#include "elicit/mpl.hpp"

namespace elicit::harness {

namespace {

std::unique_ptr<Strategy> make_eu_agent(const AgentConfig& agent, const Belief& truth) {
    switch (agent.kind) {
        case AgentConfig::Kind::Truthful:
            return truthful_eu_oracle(truth);
        case AgentConfig::Kind::Misreport: {
            if (agent.report.empty())
                throw ConfigError("agent.report: required for misreport agents");
            return truthful_eu_oracle(Belief(agent.report));
        }
        case AgentConfig::Kind::Sequences: {
            std::vector<int> bits;
            for (char c : agent.bits) bits.push_back(c == '1' ? 1 : 0);
            return std::make_unique<ScriptedStrategy>(std::move(bits));
        }
    }
    throw ConfigError("agent.kind: unsupported");
}

Belief trial_belief(const AgentConfig& agent, std::size_t n, Rng& rng) {
    if (agent.type.empty()) return sample_belief(n, rng);
    if (agent.type.size() != n) throw ConfigError("agent.type: length must equal n");
    return Belief(agent.type);
}

eu::GroundTruth make_ground_truth(const ExperimentConfig& config) {
    if (config.ground_truth.kind == GroundTruthConfig::Kind::Explicit)
        return eu::GroundTruth{Belief(config.ground_truth.probs)};
    return eu::GroundTruth::uniform(config.n);
}

ReportRow base_row(const ExperimentConfig& config, std::size_t trial, std::uint64_t seed) {
    ReportRow row;
    row.run_id = "t" + std::to_string(trial);
    row.seed = seed;
    row.mechanism = config.mechanism;
    row.n = config.n;
    row.eps = config.eps;
    return row;
}

void run_belief_trials(const ExperimentConfig& config, std::vector<ReportRow>& rows) {
    const eu::GroundTruth gt = make_ground_truth(config);
    const std::size_t rounds =
        config.rounds > 0 ? config.rounds
                          : eu::learning_round_budget(config.n, config.eps,
                                                      config.budget_constant);
    const Rng base(config.seed);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = base.derive(t);
        const Belief truth = trial_belief(config.agent, config.n, rng);
        auto agent = make_eu_agent(config.agent, truth);
        const eu::BeliefRunResult run =
            eu::run_belief_algorithm(*agent, config.n, rounds, rng, gt);
        ReportRow row = base_row(config, t, rng.seed());
        row.queries = run.transcript.rounds();
        row.error_tv = tv_distance(truth, run.hypothesis);
        row.payment = run.payment;
        rows.push_back(std::move(row));
    }
}

void run_naive_trials(const ExperimentConfig& config, std::vector<ReportRow>& rows) {
    const eu::GroundTruth gt = make_ground_truth(config);
    const Rng base(config.seed);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = base.derive(t);
        const Belief truth = trial_belief(config.agent, config.n, rng);
        auto agent = make_eu_agent(config.agent, truth);
        const audit::NaiveSearchResult run =
            audit::naive_statewise_search(*agent, config.n, config.eps);
        ReportRow row = base_row(config, t, rng.seed());
        row.queries = run.queries;
        row.error_tv = tv_distance(truth, run.hypothesis);
        if (!run.transcript.final_choice.empty()) {
            const std::size_t state = gt.draw_state(rng);
            row.payment = run.transcript.final_choice[state];
        }
        rows.push_back(std::move(row));
    }
}

void run_mpl_trials(const ExperimentConfig& config, std::vector<ReportRow>& rows) {
    const mpl::Lottery lottery{config.lottery.low, config.lottery.high, config.lottery.p_high};
    const mpl::Discretization grid(lottery.low, lottery.high, config.grid_intervals);
    const mpl::CrraFamily family(lottery);

    mpl::PaymentSchedule schedule = [&] {
        switch (config.schedule.kind) {
            case ScheduleConfig::Kind::Geometric:
                return mpl::default_geometric_schedule(family, grid, config.schedule.safety);
            case ScheduleConfig::Kind::Uniform: {
                std::vector<double> p(grid.intervals());
                for (std::size_t t = 0; t < p.size(); ++t)
                    p[t] = 1.0 / static_cast<double>(t + 1);
                return mpl::PaymentSchedule::from_probabilities(p);
            }
            case ScheduleConfig::Kind::Explicit:
                return mpl::PaymentSchedule::from_log_probabilities(config.schedule.log_p);
        }
        throw ConfigError("schedule.kind: unsupported");
    }();

    const double ce_lo = std::max(family.ce_lo(), grid.point(1));
    const double ce_hi = std::min(family.ce_hi(), grid.point(grid.intervals() - 1));
    const Rng base(config.seed);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = base.derive(t);
        double ce;
        if (config.agent.type.empty()) {
            ce = rng.uniform(ce_lo, ce_hi);
        } else {
            ce = config.agent.type.front();
            if (!(ce > grid.lo() && ce < grid.hi()))
                throw ConfigError("agent.type: CE outside the lottery interval");
        }

        std::unique_ptr<mpl::MplOracle> oracle;
        switch (config.agent.kind) {
            case AgentConfig::Kind::Truthful:
                oracle = std::make_unique<mpl::ThresholdMplOracle>(ce);
                break;
            case AgentConfig::Kind::Misreport: {
                // Empty report means "play the best response against the
                // last-question payment scheme".
                const double threshold =
                    config.agent.report.empty()
                        ? grid.point(mpl::report_function(family, ce, grid, schedule))
                        : config.agent.report.front();
                oracle = std::make_unique<mpl::ThresholdMplOracle>(threshold);
                break;
            }
            case AgentConfig::Kind::Sequences:
                throw ConfigError("agent.kind: sequences not defined for MPL mechanisms");
        }

        const mpl::SearchOutcome outcome = config.mechanism == "mpl-seq"
                                               ? mpl::sequential_search(*oracle, grid)
                                               : mpl::binary_search(*oracle, grid);

        const auto [lo, hi] = mpl::back_out_interval(outcome.stop_index, grid);
        const double estimate = 0.5 * (lo + hi);

        ReportRow row = base_row(config, t, rng.seed());
        row.queries = outcome.questions.size();
        row.error_tv = std::abs(estimate - ce);
        // Last-question payment: the stop-round sure amount with the
        // schedule's probability, the lottery otherwise.
        const double u = rng.uniform01();
        if (u < schedule.p(outcome.stop_index)) {
            row.payment = grid.point(outcome.stop_index);
        } else {
            row.payment = rng.uniform01() < lottery.p_high ? lottery.high : lottery.low;
        }
        rows.push_back(std::move(row));
    }
}

void run_cover_trials(const ExperimentConfig& config, std::vector<ReportRow>& rows) {
    const bool euclidean = config.cover.kind == CoverInstanceConfig::Kind::Euclidean;
    const cover_search::AssignmentFunction assignment =
        euclidean ? cover_search::assignment_euclidean() : cover_search::assignment_linear();
    const cover_search::TypeCover cover =
        euclidean ? cover_search::euclidean_box_cover(config.cover.box_lo, config.cover.box_hi,
                                                      2, config.eps)
                  : cover_search::linear_arc_cover(config.cover.angle_lo, config.cover.angle_hi,
                                                   config.eps);

    const Rng base(config.seed);
    for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng = base.derive(t);
        std::vector<double> theta;
        if (config.agent.type.empty()) {
            if (euclidean) {
                theta = {rng.uniform(config.cover.box_lo, config.cover.box_hi),
                         rng.uniform(config.cover.box_lo, config.cover.box_hi)};
            } else {
                const double a = rng.uniform(config.cover.angle_lo, config.cover.angle_hi);
                theta = {std::cos(a), std::sin(a)};
            }
        } else {
            theta = config.agent.type;
        }

        std::unique_ptr<Strategy> agent;
        switch (config.agent.kind) {
            case AgentConfig::Kind::Truthful: {
                agent = std::make_unique<TruthfulStrategy>(
                    [&assignment, theta](std::span<const double> outcome) {
                        return assignment.utility(theta, outcome);
                    });
                break;
            }
            case AgentConfig::Kind::Misreport: {
                if (config.agent.report.empty())
                    throw ConfigError("agent.report: required for misreport agents");
                const std::vector<double> report = config.agent.report;
                agent = std::make_unique<TruthfulStrategy>(
                    [&assignment, report](std::span<const double> outcome) {
                        return assignment.utility(report, outcome);
                    });
                break;
            }
            case AgentConfig::Kind::Sequences: {
                std::vector<int> bits;
                for (char c : config.agent.bits) bits.push_back(c == '1' ? 1 : 0);
                agent = std::make_unique<ScriptedStrategy>(std::move(bits));
                break;
            }
        }

        const cover_search::SearchResult run =
            cover_search::exhaustive_search(*agent, cover, assignment);
        ReportRow row = base_row(config, t, rng.seed());
        row.queries = run.queries;
        row.error_tv = assignment.metric(theta, run.hypothesis);
        row.payment = assignment.utility(theta, run.transcript.final_choice);
        rows.push_back(std::move(row));
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    result.rows.reserve(config.trials);
    if (config.mechanism == "belief") {
        run_belief_trials(config, result.rows);
    } else if (config.mechanism == "naive") {
        run_naive_trials(config, result.rows);
    } else if (config.mechanism == "mpl-seq" || config.mechanism == "mpl-bin") {
        run_mpl_trials(config, result.rows);
    } else if (config.mechanism == "cover") {
        run_cover_trials(config, result.rows);
    } else {
        throw ConfigError("mechanism: unsupported");
    }
    result.summary = summarize(result.rows, config_hash(config), config.seed, config.mechanism,
                               config.eps);
    return result;
}

std::pair<std::string, std::string> run_and_emit(const ExperimentConfig& config) {
    const ExperimentResult result = run_experiment(config);
    const std::string dir = config.out_dir.empty() ? default_out_dir() : config.out_dir;
    const std::string stem =
        (config.label.empty() ? config.mechanism : config.label) + "-" + config_hash(config);
    return emit_report(result.rows, result.summary, dir, stem);
}

}  // namespace elicit::harness
