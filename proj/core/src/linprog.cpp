#include "elicit/linprog.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "elicit/errors.hpp"

namespace elicit::lp {

namespace {

struct Tableau {
    std::size_t rows = 0;        // constraint rows
    std::size_t cols = 0;        // structural + artificial columns
    std::size_t structural = 0;  // columns eligible to enter in phase 2
    std::vector<double> a;       // (rows) x (cols), row-major
    std::vector<double> rhs;     // current basic values, >= 0
    std::vector<double> cost;    // phase-specific objective row (reduced costs)
    double objective = 0.0;      // negated running objective value
    std::vector<std::size_t> basis;

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double pivot_value = at(pr, pc);
        const double inv = 1.0 / pivot_value;
        for (std::size_t c = 0; c < cols; ++c) at(pr, c) *= inv;
        rhs[pr] *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
            rhs[r] -= f * rhs[pr];
            if (rhs[r] < 0.0 && rhs[r] > -1e-11) rhs[r] = 0.0;
        }
        const double f = cost[pc];
        if (f != 0.0) {
            for (std::size_t c = 0; c < cols; ++c) cost[c] -= f * at(pr, c);
            cost[pc] = 0.0;
            objective -= f * rhs[pr];
        }
        basis[pr] = pc;
    }
};

// Bland's rule: entering column = lowest index with negative reduced cost;
// leaving row = ratio-test winner with the lowest basis variable index.
enum class StepResult { Optimal, Unbounded, Pivoted };

StepResult simplex_step(Tableau& t, bool allow_artificial_entering, double tol) {
    std::size_t enter = t.cols;
    const std::size_t limit = allow_artificial_entering ? t.cols : t.structural;
    for (std::size_t c = 0; c < limit; ++c) {
        if (t.cost[c] < -tol) {
            enter = c;
            break;
        }
    }
    if (enter == t.cols) return StepResult::Optimal;

    std::size_t leave = t.rows;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows; ++r) {
        const double coef = t.at(r, enter);
        if (coef > tol) {
            const double ratio = t.rhs[r] / coef;
            if (ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 &&
                 (leave == t.rows || t.basis[r] < t.basis[leave]))) {
                best_ratio = ratio;
                leave = r;
            }
        }
    }
    if (leave == t.rows) return StepResult::Unbounded;
    t.pivot(leave, enter);
    return StepResult::Pivoted;
}

}  // namespace

Solution solve_standard(const std::vector<std::vector<double>>& A,
                        const std::vector<double>& b,
                        const std::vector<double>& c,
                        double tol) {
    const std::size_t m = A.size();
    if (b.size() != m) throw std::invalid_argument("solve_standard: rhs size mismatch");
    const std::size_t n = m == 0 ? c.size() : A.front().size();
    if (c.size() != n) throw std::invalid_argument("solve_standard: cost size mismatch");

    Tableau t;
    t.rows = m;
    t.structural = n;
    t.cols = n + m;  // artificial columns stay in the tableau for dual recovery
    t.a.assign(t.rows * t.cols, 0.0);
    t.rhs.resize(m);
    t.basis.resize(m);

    std::vector<double> row_sign(m, 1.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (A[r].size() != n) throw std::invalid_argument("solve_standard: ragged matrix");
        const double s = b[r] < 0.0 ? -1.0 : 1.0;
        row_sign[r] = s;
        for (std::size_t cidx = 0; cidx < n; ++cidx) t.at(r, cidx) = s * A[r][cidx];
        t.rhs[r] = s * b[r];
        t.at(r, n + r) = 1.0;
        t.basis[r] = n + r;
    }

    const std::size_t iteration_cap = 200 * (m + n) + 5000;
    std::size_t iterations = 0;

    // Phase 1: minimize the sum of artificials.
    t.cost.assign(t.cols, 0.0);
    t.objective = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t cidx = 0; cidx < n; ++cidx) t.cost[cidx] -= t.at(r, cidx);
        t.objective -= t.rhs[r];
    }
    while (true) {
        const StepResult sr = simplex_step(t, false, tol);
        if (sr == StepResult::Optimal) break;
        if (sr == StepResult::Unbounded)
            throw NumericalDegeneracyError("simplex: phase-1 unbounded (inconsistent input)");
        if (++iterations > iteration_cap)
            throw NumericalDegeneracyError("simplex: iteration cap exceeded in phase 1");
    }
    // Phase-1 optimum is -objective (we track the negated value).
    if (-t.objective > 1e2 * tol) {
        Solution sol;
        sol.status = Status::Infeasible;
        sol.iterations = iterations;
        return sol;
    }

    // Drive leftover artificials out of the basis where a structural pivot
    // exists; rows without one are redundant and keep a zero artificial.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < n) continue;
        for (std::size_t cidx = 0; cidx < n; ++cidx) {
            if (std::abs(t.at(r, cidx)) > 1e3 * tol) {
                t.pivot(r, cidx);
                break;
            }
        }
    }

    // Phase 2: real objective. Artificial columns keep cost 0 and are
    // barred from entering; their final reduced costs encode the duals.
    t.cost.assign(t.cols, 0.0);
    for (std::size_t cidx = 0; cidx < n; ++cidx) t.cost[cidx] = c[cidx];
    t.objective = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t bv = t.basis[r];
        const double f = t.cost[bv];
        if (f != 0.0) {
            for (std::size_t cidx = 0; cidx < t.cols; ++cidx) t.cost[cidx] -= f * t.at(r, cidx);
            t.cost[bv] = 0.0;
            t.objective -= f * t.rhs[r];
        }
    }
    while (true) {
        const StepResult sr = simplex_step(t, false, tol);
        if (sr == StepResult::Optimal) break;
        if (sr == StepResult::Unbounded) {
            Solution sol;
            sol.status = Status::Unbounded;
            sol.iterations = iterations;
            return sol;
        }
        if (++iterations > iteration_cap)
            throw NumericalDegeneracyError("simplex: iteration cap exceeded in phase 2");
    }

    Solution sol;
    sol.status = Status::Optimal;
    sol.iterations = iterations;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < n) sol.x[t.basis[r]] = t.rhs[r];
    }
    sol.value = -t.objective;
    sol.duals.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        // Reduced cost of artificial r is -y_r for the sign-normalized rows.
        sol.duals[r] = -t.cost[n + r] * row_sign[r];
    }
    return sol;
}

}  // namespace elicit::lp
