#include "elicit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "elicit/cover.hpp"
#include "elicit/errors.hpp"

namespace elicit::audit {

BudgetsDemoResult convex_budgets_demo(const Belief& alpha) {
    if (alpha.dimension() != 2)
        throw std::invalid_argument("convex_budgets_demo: two states required");
    if (!(alpha[0] < alpha[1]))
        throw std::invalid_argument("convex_budgets_demo: requires alpha_1 < alpha_2");
    // Truthful play faces second prices (2/3, 4/3) and keeps buying state 2:
    // (1/2) alpha_2 (1 + 3/4). Steering the first choice flips the second
    // budget to (4/3, 2/3): (1/2)(alpha_1 + (3/2) alpha_2).
    BudgetsDemoResult r;
    r.truthful = 0.5 * alpha[1] * (1.0 + 0.75);
    r.manipulation = 0.5 * (alpha[0] + 1.5 * alpha[1]);
    r.gain = r.manipulation - r.truthful;
    return r;
}

UniformPaymentDemo mpl_uniform_payment_demo() {
    // Eight intervals on [0, 1] put the offers at i/8; the agent's true CE
    // sits exactly on offer 3. Sure amounts are valued at face value, the
    // lottery at 0.5, and the CE offer at the lottery's worth.
    const mpl::Discretization grid(0.0, 1.0, 8);
    const double u_lottery = 0.5;
    const std::size_t true_offer = 3;
    const double ce = grid.point(true_offer);

    const auto run = [&](double threshold) {
        mpl::ThresholdMplOracle oracle(threshold);
        return mpl::binary_search(oracle, grid);
    };
    const auto value_of = [&](const mpl::MplQuestion& q) {
        if (!q.chose_sure) return u_lottery;
        return q.offer == ce ? u_lottery : q.offer;
    };

    UniformPaymentDemo demo;
    const mpl::SearchOutcome truthful = run(ce);
    const mpl::SearchOutcome deviating = run(grid.point(5));
    double sum = 0.0;
    for (const auto& q : truthful.questions) {
        demo.truthful_questions.push_back(q.offer_index);
        sum += value_of(q);
    }
    demo.truthful_payoff = sum / static_cast<double>(truthful.questions.size());
    sum = 0.0;
    for (const auto& q : deviating.questions) {
        demo.deviating_questions.push_back(q.offer_index);
        sum += value_of(q);
    }
    demo.deviating_payoff = sum / static_cast<double>(deviating.questions.size());
    return demo;
}

MplBestResponse best_response_mpl(const mpl::UtilityFamily& family, double x_true,
                                  const mpl::Discretization& grid,
                                  const mpl::PaymentSchedule& schedule) {
    MplBestResponse out;
    out.best_index = mpl::report_function(family, x_true, grid, schedule);
    out.truthful_index = grid.first_offer_at_least(x_true);

    // Payoff difference between the two stop indices, assembled in logs:
    // gain = p_b (u(x_b) - u(x)) - p_t (u(x_t) - u(x)).
    const auto term = [&](std::size_t t) -> double {
        const double x_t = grid.point(t);
        if (std::abs(x_t - x_true) < 1e-15) return -1e300;  // zero contribution
        if (x_t > x_true) return schedule.log_p(t) + family.log_delta(x_true, x_true, x_t);
        return schedule.log_p(t) + family.log_delta(x_true, x_t, x_true);  // negative branch
    };
    const double log_best = term(out.best_index);
    const double lt = grid.point(out.truthful_index) >= x_true ? term(out.truthful_index) : 0.0;
    const bool truthful_positive = grid.point(out.truthful_index) > x_true;
    if (out.best_index == out.truthful_index) {
        out.gain = 0.0;
        out.log_gain = -1e300;
        out.strictly_positive = false;
        return out;
    }
    if (!truthful_positive) {
        // Truthful stop sits exactly on the CE: its payoff equals the
        // lottery value and the whole best term is the gain.
        out.log_gain = log_best;
        out.gain = std::exp(log_best);
        out.strictly_positive = std::isfinite(log_best);
        return out;
    }
    const double big = std::max(log_best, lt);
    const double small = std::min(log_best, lt);
    const double d = small - big;
    out.strictly_positive = log_best > lt;
    out.log_gain = d < -1e-12 ? big + std::log(-std::expm1(d)) : -1e300;
    out.gain = (out.strictly_positive ? 1.0 : -1.0) * std::exp(out.log_gain);
    return out;
}

EuBestResponse best_response_eu(const Belief& alpha, const Learner& mechanism,
                                const StrategyGrid& grid, std::size_t trials,
                                std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("best_response_eu: trials >= 1 required");

    std::vector<StrategyFactory> factories;
    if (grid.kind == StrategyGrid::Kind::FixedMisreport) {
        for (const Belief& report : grid.misreports) {
            factories.push_back([report]() -> std::unique_ptr<Strategy> {
                return truthful_eu_oracle(report);
            });
        }
    } else {
        if (grid.depth > StrategyGrid::kMaxDepth)
            throw std::invalid_argument("best_response_eu: answer-sequence depth over the cap");
        const std::size_t count = std::size_t{1} << grid.depth;
        for (std::size_t bits = 0; bits < count; ++bits) {
            std::vector<int> script(grid.depth);
            for (std::size_t i = 0; i < grid.depth; ++i)
                script[i] = static_cast<int>((bits >> i) & 1u);
            factories.push_back([script]() -> std::unique_ptr<Strategy> {
                return std::make_unique<ScriptedStrategy>(script);
            });
        }
    }

    const Rng base(seed);
    const std::vector<double> truth = alpha.probs();
    const auto payoff_of = [&](const Outcome& choice) { return dot(truth, choice); };

    // Trial j re-seeds identically for the truthful run and for every
    // strategy: common random numbers across the whole grid.
    std::vector<double> truthful_payoff(trials);
    double truthful_mean = 0.0;
    for (std::size_t j = 0; j < trials; ++j) {
        Rng rng = base.derive(j);
        auto agent = truthful_eu_oracle(alpha);
        truthful_payoff[j] = payoff_of(mechanism(*agent, rng).final_choice);
        truthful_mean += truthful_payoff[j];
    }
    truthful_mean /= static_cast<double>(trials);

    EuBestResponse out;
    out.truthful_mean = truthful_mean;
    out.gains.resize(factories.size());
    out.std_errors.resize(factories.size());
    double best = -1e300;
    for (std::size_t s = 0; s < factories.size(); ++s) {
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t j = 0; j < trials; ++j) {
            Rng rng = base.derive(j);
            auto agent = factories[s]();
            const double g = payoff_of(mechanism(*agent, rng).final_choice) - truthful_payoff[j];
            const double delta = g - mean;
            mean += delta / static_cast<double>(j + 1);
            m2 += delta * (g - mean);
        }
        out.gains[s] = mean;
        const double var = trials > 1 ? m2 / static_cast<double>(trials - 1) : 0.0;
        out.std_errors[s] = std::sqrt(var / static_cast<double>(trials));
        if (mean > best) {
            best = mean;
            out.best_strategy = s;
        }
    }
    out.max_gain = factories.empty() ? 0.0 : best;
    out.max_gain_se = factories.empty() ? 0.0 : out.std_errors[out.best_strategy];
    return out;
}

NaiveSearchResult naive_statewise_search(Strategy& oracle, std::size_t n, double eps) {
    if (n < 2) throw std::invalid_argument("naive_statewise_search: n >= 2 required");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("naive_statewise_search: eps in (0,1) required");
    const std::vector<double> cover =
        epsilon_cover_interval(0.0, 1.0, 2.0 * eps / static_cast<double>(n));

    NaiveSearchResult result{Belief::uniform(n), {}, 0};
    History history;
    Rng unused(0);
    std::vector<double> estimate(n);
    for (std::size_t state = 0; state < n; ++state) {
        // Find the largest cover value the agent still prefers the state
        // claim over: answers are monotone in the sure amount.
        std::size_t lo = 0;                  // known preferred (c = 0 always is)
        std::size_t hi = cover.size();       // virtual "never prefers" sentinel
        while (lo + 1 < hi) {
            const std::size_t mid = (lo + hi) / 2;
            Outcome claim(n, 0.0);
            claim[state] = 1.0;
            Outcome sure(n, cover[mid]);
            Query q{std::move(claim), std::move(sure)};
            const int answer = oracle.respond(history, q, unused);
            history.push_back(Answered{q, answer});
            result.transcript.queries.push_back(history.back().query);
            result.transcript.answers.push_back(answer);
            ++result.queries;
            if (answer == 1) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double upper = hi < cover.size() ? cover[hi] : 1.0;
        estimate[state] = 0.5 * (cover[lo] + upper);
    }
    double sum = 0.0;
    for (double e : estimate) sum += e;
    if (sum <= 0.0) throw NumericalDegeneracyError("naive_statewise_search: degenerate answers");
    for (double& e : estimate) e /= sum;
    result.hypothesis = Belief(estimate);
    result.transcript.hypothesis = estimate;
    if (!result.transcript.queries.empty()) {
        const Query& last = result.transcript.queries.back();
        result.transcript.final_choice =
            result.transcript.answers.back() == 1 ? last.left : last.right;
    }
    return result;
}

double hypothesis_set_radius(const eu::VersionSpace& space, const Belief& reference) {
    const auto [lo, hi] = space.bounding_box();
    const std::size_t n = space.dimension();
    if (n > 16) throw std::invalid_argument("hypothesis_set_radius: dimension too large");
    const UnitVector ref = project_to_sphere(reference);
    double radius = 0.0;
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        std::vector<double> corner(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            corner[i] = ((mask >> i) & 1u) ? hi[i] : lo[i];
            sum += corner[i];
        }
        if (sum <= 0.0) continue;
        const double norm = l2_norm(corner);
        if (norm <= 0.0) continue;
        double d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = corner[i] / norm - ref[i];
            d2 += diff * diff;
        }
        radius = std::max(radius, std::sqrt(d2));
    }
    return radius;
}

}  // namespace elicit::audit
