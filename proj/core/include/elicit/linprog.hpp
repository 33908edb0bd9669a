#pragma once

#include <cstddef>
#include <vector>

namespace elicit::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    double value = 0.0;           // c.x at the optimum
    std::vector<double> x;        // primal solution
    std::vector<double> duals;    // one multiplier per row of A
    std::size_t iterations = 0;
};

// Minimize c.x subject to A x = b, x >= 0.
//
// Dense two-phase tableau simplex with Bland's rule. Intended for the
// small, well-scaled systems produced by the version-space and schedule
// machinery (tens of rows, a few hundred columns). Duals are recovered
// from the reduced costs of the retained artificial columns.
Solution solve_standard(const std::vector<std::vector<double>>& A,
                        const std::vector<double>& b,
                        const std::vector<double>& c,
                        double tol = 1e-9);

}  // namespace elicit::lp
