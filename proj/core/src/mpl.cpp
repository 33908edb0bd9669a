#include "elicit/mpl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit::mpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + w * (ys[j] - ys[j - 1]);
}

}  // namespace

void Lottery::validate() const {
    if (!(low < high)) throw std::invalid_argument("Lottery: low < high required");
    if (!(p_high > 0.0 && p_high < 1.0))
        throw std::invalid_argument("Lottery: p_high in (0,1) required");
}

// ---------------------------------------------------------------------------
// CRRA family

double CrraFamily::value_sigma(double sigma, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("CrraFamily: money must be non-negative");
    const double lx = std::log(x);
    if (std::abs(sigma) < 1e-12) return lx;
    return std::expm1(sigma * lx) / sigma;
}

double CrraFamily::log_delta_sigma(double sigma, double x_lo, double x_hi) {
    if (!(x_lo < x_hi)) throw std::invalid_argument("CrraFamily: x_lo < x_hi required");
    const double a_lo = std::log(x_lo);
    const double a_hi = std::log(x_hi);
    const double da = a_hi - a_lo;
    if (std::abs(sigma) < 1e-12) return std::log(da);
    // u(x_hi) - u(x_lo) = e^{sigma a_lo} * expm1(sigma da) / sigma, positive
    // for every sigma; assembled in logs to dodge cancellation.
    return sigma * a_lo + std::log(std::expm1(sigma * da) / sigma);
}

CrraFamily::CrraFamily(const Lottery& lottery, double margin_fraction, const Options& options)
    : CrraFamily(lottery,
                 lottery.low + margin_fraction * (lottery.high - lottery.low),
                 lottery.high - margin_fraction * (lottery.high - lottery.low), options) {}

CrraFamily::CrraFamily(const Lottery& lottery, double ce_lo, double ce_hi,
                       const Options& options)
    : lottery_(lottery), ce_lo_(ce_lo), ce_hi_(ce_hi), options_(options) {
    lottery_.validate();
    if (!(lottery_.low > 0.0))
        throw std::invalid_argument("CrraFamily: lottery support must be positive");
    if (!(ce_lo_ < ce_hi_)) throw std::invalid_argument("CrraFamily: ce_lo < ce_hi required");
    const double reach_lo = ce_for_sigma(options_.sigma_min);
    const double reach_hi = ce_for_sigma(options_.sigma_max);
    if (ce_lo_ < reach_lo || ce_hi_ > reach_hi)
        throw std::invalid_argument("CrraFamily: requested CE range not reachable");
    estimate_constants(options_);
}

double CrraFamily::ce_for_sigma(double sigma) const {
    const double a_lo = std::log(lottery_.low);
    const double a_hi = std::log(lottery_.high);
    const double p = lottery_.p_high;
    if (std::abs(sigma) < 1e-9) return std::exp(p * a_hi + (1.0 - p) * a_lo);
    const double mean = p * std::exp(sigma * a_hi) + (1.0 - p) * std::exp(sigma * a_lo);
    return std::exp(std::log(mean) / sigma);
}

double CrraFamily::sigma_for_ce(double ce) const {
    if (!(ce > lottery_.low && ce < lottery_.high))
        throw std::invalid_argument("CrraFamily: CE outside the lottery support");
    double lo = options_.sigma_min;
    double hi = options_.sigma_max;
    if (ce <= ce_for_sigma(lo) || ce >= ce_for_sigma(hi))
        throw std::invalid_argument("CrraFamily: CE outside the representable range");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double value = ce_for_sigma(mid);
        if (std::abs(value - ce) <= 1e-14 || hi - lo <= 1e-13) return mid;
        if (value < ce) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double CrraFamily::value(double ce, double x) const {
    return value_sigma(sigma_for_ce(ce), x);
}

double CrraFamily::log_delta(double ce, double x_lo, double x_hi) const {
    return log_delta_sigma(sigma_for_ce(ce), x_lo, x_hi);
}

void CrraFamily::estimate_constants(const Options& options) {
    const std::size_t members = std::max<std::size_t>(options.estimation_members, 3);
    const std::size_t grid = std::max<std::size_t>(options.estimation_grid, 16);
    std::vector<double> sigmas(members);
    for (std::size_t i = 0; i < members; ++i) {
        const double ce = ce_lo_ + (ce_hi_ - ce_lo_) * static_cast<double>(i) /
                                       static_cast<double>(members - 1);
        sigmas[i] = sigma_for_ce(ce);
    }
    std::vector<double> xs(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        xs[j] = lottery_.low + (lottery_.high - lottery_.low) * static_cast<double>(j) /
                                   static_cast<double>(grid - 1);
    }
    const double log_dx = std::log(xs[1] - xs[0]);

    double log_k = kInf;
    double log_c2 = -kInf;
    double m_sup = 0.0;
    for (double sigma : sigmas) {
        for (std::size_t j = 0; j + 1 < grid; ++j) {
            const double log_slope = log_delta_sigma(sigma, xs[j], xs[j + 1]) - log_dx;
            log_k = std::min(log_k, log_slope);
            log_c2 = std::max(log_c2, log_slope);
        }
        m_sup = std::max(m_sup, value_sigma(sigma, lottery_.high) -
                                    value_sigma(sigma, lottery_.low));
    }

    // Sensitivity to the member index and pointwise monotonicity, on a
    // coarser grid; both involve differences across members.
    const std::size_t cross_grid = std::min<std::size_t>(grid, 512);
    double c1 = 0.0;
    bool monotone = true;
    const double ce_step = (ce_hi_ - ce_lo_) / static_cast<double>(members - 1);
    for (std::size_t i = 0; i + 1 < members; ++i) {
        for (std::size_t j = 0; j < cross_grid; ++j) {
            const double x = lottery_.low + (lottery_.high - lottery_.low) *
                                                static_cast<double>(j) /
                                                static_cast<double>(cross_grid - 1);
            const double lo_val = value_sigma(sigmas[i], x);
            const double hi_val = value_sigma(sigmas[i + 1], x);
            c1 = std::max(c1, std::abs(hi_val - lo_val) / ce_step);
            if (hi_val < lo_val - 1e-9) monotone = false;
        }
    }

    constants_.log_inverse_lipschitz = log_k;
    constants_.inverse_lipschitz = std::exp(log_k);
    constants_.utility_range = m_sup;
    constants_.cross_type = c1;
    constants_.cross_outcome = std::exp(log_c2);
    constants_.monotone_in_ce = monotone;
}

// ---------------------------------------------------------------------------
// Tabulated family

TabulatedFamily::TabulatedFamily(const Lottery& lottery, std::vector<double> money_grid,
                                 std::vector<double> member_ces,
                                 std::vector<std::vector<double>> values)
    : lottery_(lottery),
      money_grid_(std::move(money_grid)),
      member_ces_(std::move(member_ces)),
      values_(std::move(values)) {
    lottery_.validate();
    if (money_grid_.size() < 2) throw std::invalid_argument("TabulatedFamily: grid too small");
    if (member_ces_.size() < 2 || member_ces_.size() != values_.size())
        throw std::invalid_argument("TabulatedFamily: need one curve per CE");
    for (std::size_t j = 1; j < money_grid_.size(); ++j) {
        if (!(money_grid_[j] > money_grid_[j - 1]))
            throw std::invalid_argument("TabulatedFamily: grid must increase");
    }
    for (std::size_t i = 0; i < member_ces_.size(); ++i) {
        if (i > 0 && !(member_ces_[i] > member_ces_[i - 1]))
            throw std::invalid_argument("TabulatedFamily: member CEs must increase");
        if (values_[i].size() != money_grid_.size())
            throw std::invalid_argument("TabulatedFamily: curve length mismatch");
        for (std::size_t j = 1; j < values_[i].size(); ++j) {
            if (!(values_[i][j] > values_[i][j - 1]))
                throw std::invalid_argument("TabulatedFamily: curves must increase");
        }
    }
    estimate_constants();
}

TabulatedFamily TabulatedFamily::sample_from(const UtilityFamily& family, std::size_t members,
                                             std::size_t grid_points) {
    if (members < 2 || grid_points < 2)
        throw std::invalid_argument("TabulatedFamily: need >= 2 members and grid points");
    const Lottery& lot = family.lottery();
    std::vector<double> grid(grid_points);
    for (std::size_t j = 0; j < grid_points; ++j) {
        grid[j] = lot.low + (lot.high - lot.low) * static_cast<double>(j) /
                                static_cast<double>(grid_points - 1);
    }
    std::vector<double> ces(members);
    std::vector<std::vector<double>> values(members, std::vector<double>(grid_points));
    for (std::size_t i = 0; i < members; ++i) {
        ces[i] = family.ce_lo() + (family.ce_hi() - family.ce_lo()) * static_cast<double>(i) /
                                      static_cast<double>(members - 1);
        for (std::size_t j = 0; j < grid_points; ++j) values[i][j] = family.value(ces[i], grid[j]);
    }
    return TabulatedFamily(lot, std::move(grid), std::move(ces), std::move(values));
}

double TabulatedFamily::value(double ce, double x) const {
    ce = std::clamp(ce, member_ces_.front(), member_ces_.back());
    const auto it = std::upper_bound(member_ces_.begin(), member_ces_.end(), ce);
    std::size_t j = static_cast<std::size_t>(it - member_ces_.begin());
    if (j == 0) j = 1;
    if (j == member_ces_.size()) j = member_ces_.size() - 1;
    const double w = (ce - member_ces_[j - 1]) / (member_ces_[j] - member_ces_[j - 1]);
    const double lo_val = lerp_at(money_grid_, values_[j - 1], x);
    const double hi_val = lerp_at(money_grid_, values_[j], x);
    return lo_val + w * (hi_val - lo_val);
}

double TabulatedFamily::log_delta(double ce, double x_lo, double x_hi) const {
    const double d = value(ce, x_hi) - value(ce, x_lo);
    if (!(d > 0.0)) throw NumericalDegeneracyError("TabulatedFamily: non-positive delta");
    return std::log(d);
}

void TabulatedFamily::estimate_constants() {
    double log_k = kInf;
    double log_c2 = -kInf;
    double m_sup = 0.0;
    double c1 = 0.0;
    bool monotone = true;
    for (std::size_t i = 0; i < member_ces_.size(); ++i) {
        for (std::size_t j = 0; j + 1 < money_grid_.size(); ++j) {
            const double slope = (values_[i][j + 1] - values_[i][j]) /
                                 (money_grid_[j + 1] - money_grid_[j]);
            log_k = std::min(log_k, std::log(slope));
            log_c2 = std::max(log_c2, std::log(slope));
        }
        m_sup = std::max(m_sup, values_[i].back() - values_[i].front());
        if (i > 0) {
            const double dce = member_ces_[i] - member_ces_[i - 1];
            for (std::size_t j = 0; j < money_grid_.size(); ++j) {
                const double diff = values_[i][j] - values_[i - 1][j];
                c1 = std::max(c1, std::abs(diff) / dce);
                if (diff < -1e-9) monotone = false;
            }
        }
    }
    constants_.log_inverse_lipschitz = log_k;
    constants_.inverse_lipschitz = std::exp(log_k);
    constants_.utility_range = m_sup;
    constants_.cross_type = c1;
    constants_.cross_outcome = std::exp(log_c2);
    constants_.monotone_in_ce = monotone;
}

// ---------------------------------------------------------------------------
// Discretization and schedule

Discretization::Discretization(double lo, double hi, std::size_t intervals)
    : lo_(lo), hi_(hi), n_(intervals) {
    if (!(lo < hi)) throw std::invalid_argument("Discretization: lo < hi required");
    if (intervals < 1) throw std::invalid_argument("Discretization: need >= 1 interval");
}

double Discretization::point(std::size_t k) const {
    if (k > n_) throw std::out_of_range("Discretization: point index");
    if (k == 0) return lo_;
    if (k == n_) return hi_;
    return lo_ + (hi_ - lo_) * static_cast<double>(k) / static_cast<double>(n_);
}

std::size_t Discretization::first_offer_at_least(double x) const {
    if (!(x > lo_ && x < hi_))
        throw std::invalid_argument("Discretization: query outside the open interval");
    const double raw = (x - lo_) / (hi_ - lo_) * static_cast<double>(n_);
    auto t = static_cast<std::size_t>(std::ceil(raw - 1e-12));
    t = std::max<std::size_t>(t, 1);
    while (t < n_ && point(t) < x) ++t;
    while (t > 1 && point(t - 1) >= x) --t;
    return t;
}

PaymentSchedule::PaymentSchedule(std::vector<double> log_p) : log_p_(std::move(log_p)) {
    if (log_p_.empty()) throw std::invalid_argument("PaymentSchedule: empty");
    for (double lp : log_p_) {
        if (!(lp <= 1e-12) || std::isnan(lp))
            throw std::invalid_argument("PaymentSchedule: probabilities must lie in (0, 1]");
        if (std::isinf(lp)) throw std::invalid_argument("PaymentSchedule: zero probability");
    }
}

PaymentSchedule PaymentSchedule::geometric(std::size_t n, double log_ratio, double log_first) {
    if (n < 1) throw std::invalid_argument("PaymentSchedule: need >= 1 round");
    std::vector<double> log_p(n);
    for (std::size_t t = 0; t < n; ++t) log_p[t] = log_first + static_cast<double>(t) * log_ratio;
    return PaymentSchedule(std::move(log_p));
}

PaymentSchedule PaymentSchedule::from_probabilities(const std::vector<double>& p) {
    std::vector<double> log_p(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0 && p[i] <= 1.0))
            throw std::invalid_argument("PaymentSchedule: probabilities must lie in (0, 1]");
        log_p[i] = std::log(p[i]);
    }
    return PaymentSchedule(std::move(log_p));
}

PaymentSchedule PaymentSchedule::from_log_probabilities(std::vector<double> log_p) {
    return PaymentSchedule(std::move(log_p));
}

double PaymentSchedule::log_p(std::size_t t) const {
    if (t < 1 || t > log_p_.size()) throw std::out_of_range("PaymentSchedule: round index");
    return log_p_[t - 1];
}

double PaymentSchedule::p(std::size_t t) const { return std::exp(log_p(t)); }

// ---------------------------------------------------------------------------
// Operations

double certainty_equivalent(const std::function<double(double)>& u, const Lottery& lottery,
                            double tol) {
    lottery.validate();
    double a = lottery.low;
    double b = lottery.high;
    const double ua = u(a);
    const double ub = u(b);
    if (!(ua < ub))
        throw std::invalid_argument("certainty_equivalent: curve not increasing on bracket");
    const double target = lottery.p_high * ub + (1.0 - lottery.p_high) * ua;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        const double um = u(mid);
        if (um < ua - 1e-12 || um > ub + 1e-12)
            throw std::invalid_argument("certainty_equivalent: bracket violation (non-monotone)");
        if (std::abs(um - target) <= tol || (b - a) <= 1e-15 * std::max(1.0, std::abs(b)))
            return mid;
        if (um < target) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

double stopping_payoff(double p, double u_offer, double u_true) {
    return p * u_offer + (1.0 - p) * u_true;
}

double mpl_payoff(const UtilityFamily& family, double x_true, std::size_t t,
                  const Discretization& grid, const PaymentSchedule& schedule) {
    if (t < 1 || t > grid.intervals()) throw std::out_of_range("mpl_payoff: offer index");
    const double p = schedule.p(t);
    return stopping_payoff(p, family.value(x_true, grid.point(t)), family.value(x_true, x_true));
}

std::size_t report_function(const UtilityFamily& family, double x_true,
                            const Discretization& grid, const PaymentSchedule& schedule) {
    const std::size_t n = grid.intervals();
    if (schedule.size() < n) throw std::invalid_argument("report_function: schedule too short");
    if (!(x_true > grid.lo() && x_true < grid.hi()))
        throw std::invalid_argument("report_function: CE outside the open interval");

    // Stopping at t is worth u(x) + p_t (u(x_t) - u(x)); only offers above
    // the true CE can beat staying at the lottery value, so the argmax is
    // over log p_t + ln(u(x_t) - u(x)).
    // Ascending scan with a strict improvement test breaks exact ties
    // toward the smaller index.
    std::size_t best = 0;
    double best_score = -kInf;
    for (std::size_t t = 1; t <= n; ++t) {
        const double x_t = grid.point(t);
        if (!(x_t > x_true)) continue;
        const double score = schedule.log_p(t) + family.log_delta(x_true, x_true, x_t);
        if (score > best_score) {
            best = t;
            best_score = score;
        }
    }
    if (best == 0)
        throw NumericalDegeneracyError("report_function: no offer above the true CE");
    return best;
}

ScheduleValidation validate_schedule(const PaymentSchedule& schedule,
                                     const UtilityFamily& family, const Discretization& grid) {
    ScheduleValidation v;
    const FamilyConstants& fc = family.constants();
    v.log_ratio_bound = fc.log_inverse_lipschitz + std::log(grid.step()) -
                        std::log(2.0 * fc.utility_range);
    v.strictly_decreasing = true;
    v.ratio_condition = true;
    v.min_decrease_slack = kInf;
    v.min_ratio_slack = kInf;
    const std::size_t n = std::min<std::size_t>(schedule.size(), grid.intervals());
    for (std::size_t t = 1; t + 1 <= n; ++t) {
        const double step = schedule.log_p(t) - schedule.log_p(t + 1);  // > 0 when decreasing
        v.min_decrease_slack = std::min(v.min_decrease_slack, step);
        if (!(step > 0.0)) v.strictly_decreasing = false;
        const double ratio_slack = schedule.log_p(t) + v.log_ratio_bound - schedule.log_p(t + 1);
        v.min_ratio_slack = std::min(v.min_ratio_slack, ratio_slack);
        if (!(ratio_slack > 0.0)) v.ratio_condition = false;
    }
    v.pass = v.strictly_decreasing && v.ratio_condition;
    return v;
}

PaymentSchedule default_geometric_schedule(const UtilityFamily& family,
                                           const Discretization& grid, double safety) {
    if (!(safety > 0.0 && safety < 1.0))
        throw std::invalid_argument("default_geometric_schedule: safety in (0,1) required");
    const FamilyConstants& fc = family.constants();
    const double log_ratio = std::log(safety) + fc.log_inverse_lipschitz +
                             std::log(grid.step()) - std::log(2.0 * fc.utility_range);
    if (!(log_ratio < 0.0))
        throw NumericalDegeneracyError(
            "default_geometric_schedule: ratio bound not below 1; constants degenerate");
    return PaymentSchedule::geometric(grid.intervals(), log_ratio, 0.0);
}

LambdaGap estimate_lambda_gap(const UtilityFamily& family, const Discretization& grid,
                              const PaymentSchedule& schedule, std::size_t samples,
                              double ce_margin_fraction) {
    const std::size_t n = grid.intervals();
    const double lo = std::max(family.ce_lo(),
                               grid.lo() + ce_margin_fraction * (grid.hi() - grid.lo()));
    const double hi = std::min(family.ce_hi(),
                               grid.hi() - ce_margin_fraction * (grid.hi() - grid.lo()));
    double min_log = kInf;
    for (std::size_t s = 0; s < samples; ++s) {
        const double x = lo + (hi - lo) * (static_cast<double>(s) + 0.5) /
                                  static_cast<double>(samples);
        // Signed log magnitudes of p_t (u(x_t) - u(x)) per offer.
        std::vector<double> log_mag(n + 1);
        std::vector<int> sign(n + 1);
        for (std::size_t t = 1; t <= n; ++t) {
            const double x_t = grid.point(t);
            if (std::abs(x_t - x) < 1e-15) {
                log_mag[t] = -kInf;
                sign[t] = 0;
            } else if (x_t > x) {
                log_mag[t] = schedule.log_p(t) + family.log_delta(x, x, x_t);
                sign[t] = 1;
            } else {
                log_mag[t] = schedule.log_p(t) + family.log_delta(x, x_t, x);
                sign[t] = -1;
            }
        }
        for (std::size_t s1 = 1; s1 <= n; ++s1) {
            for (std::size_t s2 = s1 + 1; s2 <= n; ++s2) {
                double combined;
                if (sign[s1] == 0) {
                    combined = log_mag[s2];
                } else if (sign[s2] == 0) {
                    combined = log_mag[s1];
                } else {
                    const double big = std::max(log_mag[s1], log_mag[s2]);
                    const double small = std::min(log_mag[s1], log_mag[s2]);
                    const double d = small - big;  // <= 0
                    if (sign[s1] != sign[s2]) {
                        combined = big + std::log1p(std::exp(d));
                    } else if (d < -1e-12) {
                        combined = big + std::log(-std::expm1(d));
                    } else {
                        combined = -kInf;  // numerically identical terms
                    }
                }
                min_log = std::min(min_log, combined);
            }
        }
    }
    return LambdaGap{std::exp(min_log), min_log};
}

ThresholdMplOracle make_strategic_oracle(const UtilityFamily& family, double x_true,
                                         const Discretization& grid,
                                         const PaymentSchedule& schedule) {
    const std::size_t r = report_function(family, x_true, grid, schedule);
    return ThresholdMplOracle(grid.point(r));
}

SearchOutcome sequential_search(MplOracle& oracle, const Discretization& grid) {
    SearchOutcome out;
    const std::size_t n = grid.intervals();
    std::size_t stop = n;
    for (std::size_t t = 1; t <= n; ++t) {
        const double offer = grid.point(t);
        const bool sure = oracle.prefers_sure(t, offer);
        out.questions.push_back(MplQuestion{t, offer, sure});
        if (sure) {
            stop = t;
            break;
        }
    }
    out.stop_index = stop;
    out.interval = {grid.point(stop - 1), grid.point(stop)};
    return out;
}

SearchOutcome binary_search(MplOracle& oracle, const Discretization& grid) {
    SearchOutcome out;
    const std::size_t n = grid.intervals();
    std::size_t lo = 1;
    std::size_t hi = n;
    if (n == 1) {
        const bool sure = oracle.prefers_sure(1, grid.point(1));
        out.questions.push_back(MplQuestion{1, grid.point(1), sure});
    }
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double offer = grid.point(mid);
        const bool sure = oracle.prefers_sure(mid, offer);
        out.questions.push_back(MplQuestion{mid, offer, sure});
        if (sure) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    out.stop_index = lo;
    out.interval = {grid.point(lo - 1), grid.point(lo)};
    return out;
}

std::pair<double, double> back_out_interval(std::size_t report_index,
                                            const Discretization& grid) {
    if (report_index < 1 || report_index > grid.intervals())
        throw std::out_of_range("back_out_interval: report index");
    const std::size_t lo_index = report_index >= 2 ? report_index - 2 : 0;
    return {grid.point(lo_index), grid.point(report_index)};
}

}  // namespace elicit::mpl
