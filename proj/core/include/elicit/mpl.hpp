#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace elicit::mpl {

// Two-outcome money lottery; the fair coin p_high = 1/2 is the default.
struct Lottery {
    double low;
    double high;
    double p_high = 0.5;

    void validate() const;
    double expected_value() const { return p_high * high + (1.0 - p_high) * low; }
};

// Family-wide constants estimated on sampled members and grid points.
struct FamilyConstants {
    double inverse_lipschitz = 0.0;      // K: uniform lower slope bound
    double log_inverse_lipschitz = 0.0;  // ln K (K can be far below 1)
    double utility_range = 0.0;          // M: sup of u(high) - u(low)
    double cross_type = 0.0;             // C1: sensitivity to the member index
    double cross_outcome = 0.0;          // C2: uniform upper slope bound
    bool monotone_in_ce = true;          // higher CE => pointwise higher curve
};

// A set of utility curves indexed by certainty equivalent: for every
// ce in [ce_lo, ce_hi] there is exactly one member whose certainty
// equivalent for the family's lottery is ce.
class UtilityFamily {
public:
    virtual ~UtilityFamily() = default;

    virtual const Lottery& lottery() const = 0;
    virtual double ce_lo() const = 0;
    virtual double ce_hi() const = 0;

    // Utility of money x under the member with certainty equivalent ce.
    virtual double value(double ce, double x) const = 0;

    // ln(u(x_hi) - u(x_lo)) for that member, x_lo < x_hi, computed without
    // cancellation. Utility differences this small decide strategic
    // reports, so they cannot go through a plain subtraction.
    virtual double log_delta(double ce, double x_lo, double x_hi) const = 0;

    virtual const FamilyConstants& constants() const = 0;
};

// Normalized power utility (x^sigma - 1) / sigma, the sigma -> 0 member
// being log utility. Strictly increasing for every real sigma, pointwise
// increasing in sigma, and its certainty equivalent (the power mean of the
// lottery outcomes) sweeps the whole interval (low, high) as sigma runs
// over the reals. Members are indexed by certainty equivalent.
class CrraFamily final : public UtilityFamily {
public:
    struct Options {
        double sigma_min = -60.0;
        double sigma_max = 80.0;
        std::size_t estimation_members = 65;
        std::size_t estimation_grid = 10'000;
    };

    // Margin is the fraction of the lottery span kept away from each end
    // when choosing the default certainty-equivalent range.
    explicit CrraFamily(const Lottery& lottery, double margin_fraction = 0.05,
                        const Options& options = {});
    CrraFamily(const Lottery& lottery, double ce_lo, double ce_hi, const Options& options = {});

    const Lottery& lottery() const override { return lottery_; }
    double ce_lo() const override { return ce_lo_; }
    double ce_hi() const override { return ce_hi_; }
    double value(double ce, double x) const override;
    double log_delta(double ce, double x_lo, double x_hi) const override;
    const FamilyConstants& constants() const override { return constants_; }

    double sigma_for_ce(double ce) const;
    double ce_for_sigma(double sigma) const;

    static double value_sigma(double sigma, double x);
    static double log_delta_sigma(double sigma, double x_lo, double x_hi);

private:
    void estimate_constants(const Options& options);

    Lottery lottery_;
    double ce_lo_;
    double ce_hi_;
    Options options_;
    FamilyConstants constants_;
};

// Curves stored as sampled values on a shared money grid, indexed by
// certainty equivalent, interpolated linearly in both coordinates.
class TabulatedFamily final : public UtilityFamily {
public:
    TabulatedFamily(const Lottery& lottery, std::vector<double> money_grid,
                    std::vector<double> member_ces, std::vector<std::vector<double>> values);

    // Samples `members` curves from another family onto a uniform grid.
    static TabulatedFamily sample_from(const UtilityFamily& family, std::size_t members,
                                       std::size_t grid_points);

    const Lottery& lottery() const override { return lottery_; }
    double ce_lo() const override { return member_ces_.front(); }
    double ce_hi() const override { return member_ces_.back(); }
    double value(double ce, double x) const override;
    double log_delta(double ce, double x_lo, double x_hi) const override;
    const FamilyConstants& constants() const override { return constants_; }

private:
    void estimate_constants();

    Lottery lottery_;
    std::vector<double> money_grid_;
    std::vector<double> member_ces_;
    std::vector<std::vector<double>> values_;
    FamilyConstants constants_;
};

// Equal-length partition of the lottery interval: points x_0 = low through
// x_n = high. Offers made to the agent are x_1 ... x_n.
class Discretization {
public:
    Discretization(double lo, double hi, std::size_t intervals);

    double point(std::size_t k) const;  // x_k, 0 <= k <= n
    std::size_t intervals() const { return n_; }
    double step() const { return (hi_ - lo_) / static_cast<double>(n_); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

    // Smallest offer index t >= 1 with x_t >= x.
    std::size_t first_offer_at_least(double x) const;

private:
    double lo_;
    double hi_;
    std::size_t n_;
};

// Probability that the stopping-round sure amount is paid, per round.
// Stored in log space: schedules that satisfy the recovery condition decay
// below the double-precision floor within a handful of rounds.
class PaymentSchedule {
public:
    static PaymentSchedule geometric(std::size_t n, double log_ratio, double log_first = 0.0);
    static PaymentSchedule from_probabilities(const std::vector<double>& p);
    static PaymentSchedule from_log_probabilities(std::vector<double> log_p);

    std::size_t size() const { return log_p_.size(); }
    double log_p(std::size_t t) const;  // t in [1, n]
    double p(std::size_t t) const;      // exp(log_p); may underflow to 0 in display

private:
    explicit PaymentSchedule(std::vector<double> log_p);
    std::vector<double> log_p_;
};

// Sure amount x with |u(x) - E[u(L)]| <= tol, by bisection on the bracket
// [low, high]. Throws if the curve is not increasing across the bracket.
double certainty_equivalent(const std::function<double(double)>& u, const Lottery& lottery,
                            double tol = 1e-10);

// Expected payoff p * u_offer + (1 - p) * u_true of stopping at an offer
// valued u_offer when the agent's lottery-equivalent utility is u_true.
double stopping_payoff(double p, double u_offer, double u_true);

// Payoff of an agent with certainty equivalent x_true stopping at offer t.
double mpl_payoff(const UtilityFamily& family, double x_true, std::size_t t,
                  const Discretization& grid, const PaymentSchedule& schedule);

// Best-response stopping index: argmax over offers of the stopping payoff,
// ties broken toward the smaller index. Computed in log space, comparing
// log p_t + ln(u(x_t) - u(x_true)) across offers above the true CE.
std::size_t report_function(const UtilityFamily& family, double x_true,
                            const Discretization& grid, const PaymentSchedule& schedule);

struct ScheduleValidation {
    bool pass = false;
    bool strictly_decreasing = false;
    bool ratio_condition = false;
    // Smallest log-slack of each condition across rounds; negative means a
    // violation somewhere.
    double min_decrease_slack = 0.0;
    double min_ratio_slack = 0.0;
    double log_ratio_bound = 0.0;  // ln(K l / 2M)
};

// Checks p_{t+1} < p_t and p_{t+1} < (K l / 2M) p_t for all t.
ScheduleValidation validate_schedule(const PaymentSchedule& schedule,
                                     const UtilityFamily& family, const Discretization& grid);

// Geometric schedule with ratio = safety * K l / (2M) and first entry 1;
// passes validation by construction whenever safety < 1.
PaymentSchedule default_geometric_schedule(const UtilityFamily& family,
                                           const Discretization& grid, double safety = 0.9);

// Smallest payoff deviation between two distinct reports, over sampled
// true types. Reported in log space next to the (possibly underflowing)
// direct value.
struct LambdaGap {
    double value = 0.0;
    double log_value = 0.0;
};
LambdaGap estimate_lambda_gap(const UtilityFamily& family, const Discretization& grid,
                              const PaymentSchedule& schedule, std::size_t samples = 10'000,
                              double ce_margin_fraction = 0.05);

// Answers sure-amount-versus-lottery questions.
class MplOracle {
public:
    virtual ~MplOracle() = default;
    // Indifference counts as preferring the sure amount.
    virtual bool prefers_sure(std::size_t t, double offer) = 0;
};

// Prefers the sure amount exactly when offer >= threshold. A truthful
// agent's threshold is its certainty equivalent; a strategic agent against
// a last-question payment scheme uses the offer it wants to stop at.
class ThresholdMplOracle final : public MplOracle {
public:
    explicit ThresholdMplOracle(double threshold) : threshold_(threshold) {}
    bool prefers_sure(std::size_t, double offer) override { return offer >= threshold_; }

private:
    double threshold_;
};

// Oracle playing the best response of a true-CE agent against the
// last-question payment scheme: it answers as if its certainty equivalent
// were the offer at the optimal stopping index.
ThresholdMplOracle make_strategic_oracle(const UtilityFamily& family, double x_true,
                                         const Discretization& grid,
                                         const PaymentSchedule& schedule);

struct MplQuestion {
    std::size_t offer_index;
    double offer;
    bool chose_sure;
};

struct SearchOutcome {
    std::size_t stop_index = 0;                  // reported interval index T
    std::pair<double, double> interval{0, 0};    // (x_{T-1}, x_T]
    std::vector<MplQuestion> questions;
};

// Offers x_1, x_2, ... in order until the oracle takes the sure amount;
// an oracle that never stops is assigned the terminal offer.
SearchOutcome sequential_search(MplOracle& oracle, const Discretization& grid);

// Bisection over offer indices; asks at most ceil(log2 n) + 1 questions.
// The last question asked is the one the payment rides on.
SearchOutcome binary_search(MplOracle& oracle, const Discretization& grid);

// Interval guaranteed to contain the true certainty equivalent given a
// strategic report at `report_index` under a validated schedule. Interior
// reports give (x_{t-2}, x_t) of width 2l; index 1 gives (x_0, x_1).
std::pair<double, double> back_out_interval(std::size_t report_index,
                                            const Discretization& grid);

}  // namespace elicit::mpl
