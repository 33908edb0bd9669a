#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "elicit/linprog.hpp"
#include "elicit/rng.hpp"

using namespace elicit;

namespace {

// Independent check: enumerate all basic solutions of {Ax = b, x >= 0}
// and take the best feasible one. Exponential, test-only.
std::optional<double> brute_force_min(const std::vector<std::vector<double>>& A,
                                      const std::vector<double>& b,
                                      const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t n = A.front().size();
    std::vector<std::size_t> cols(m);
    std::optional<double> best;

    const auto evaluate_basis = [&]() {
        // Solve the m x m system by Gaussian elimination with pivoting.
        std::vector<std::vector<double>> mat(m, std::vector<double>(m + 1));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t k = 0; k < m; ++k) mat[r][k] = A[r][cols[k]];
            mat[r][m] = b[r];
        }
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t pivot = k;
            for (std::size_t r = k + 1; r < m; ++r) {
                if (std::abs(mat[r][k]) > std::abs(mat[pivot][k])) pivot = r;
            }
            if (std::abs(mat[pivot][k]) < 1e-10) return;  // singular basis
            std::swap(mat[k], mat[pivot]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == k) continue;
                const double f = mat[r][k] / mat[k][k];
                for (std::size_t cc = k; cc <= m; ++cc) mat[r][cc] -= f * mat[k][cc];
            }
        }
        double value = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double xk = mat[k][m] / mat[k][k];
            if (xk < -1e-9) return;  // infeasible basic solution
            value += c[cols[k]] * xk;
        }
        if (!best.has_value() || value < *best) best = value;
    };

    const auto recurse = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
        if (depth == m) {
            evaluate_basis();
            return;
        }
        for (std::size_t j = start; j + (m - depth - 1) < n; ++j) {
            cols[depth] = j;
            self(self, j + 1, depth + 1);
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

}  // namespace

TEST_CASE("textbook problem with known optimum") {
    // min -3x - 5y s.t. x + s1 = 4, 2y + s2 = 12, 3x + 2y + s3 = 18.
    const std::vector<std::vector<double>> A = {
        {1, 0, 1, 0, 0}, {0, 2, 0, 1, 0}, {3, 2, 0, 0, 1}};
    const std::vector<double> b = {4, 12, 18};
    const std::vector<double> c = {-3, -5, 0, 0, 0};
    const auto sol = lp::solve_standard(A, b, c);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(sol.value == doctest::Approx(-36.0));
    CHECK(sol.x[0] == doctest::Approx(2.0));
    CHECK(sol.x[1] == doctest::Approx(6.0));
}

TEST_CASE("infeasible system is reported") {
    const std::vector<std::vector<double>> A = {{1, 1}, {1, 1}};
    const std::vector<double> b = {1, 3};
    const std::vector<double> c = {1, 0};
    CHECK(lp::solve_standard(A, b, c).status == lp::Status::Infeasible);
}

TEST_CASE("unbounded direction is reported") {
    const std::vector<std::vector<double>> A = {{1, -1}};
    const std::vector<double> b = {0};
    const std::vector<double> c = {-1, 0};
    CHECK(lp::solve_standard(A, b, c).status == lp::Status::Unbounded);
}

TEST_CASE("negative rhs rows are handled") {
    // x - y = -2, x + y = 4  ->  x = 1, y = 3.
    const std::vector<std::vector<double>> A = {{1, -1}, {1, 1}};
    const std::vector<double> b = {-2, 4};
    const std::vector<double> c = {1, 1};
    const auto sol = lp::solve_standard(A, b, c);
    REQUIRE(sol.status == lp::Status::Optimal);
    CHECK(sol.x[0] == doctest::Approx(1.0));
    CHECK(sol.x[1] == doctest::Approx(3.0));
}

TEST_CASE("random bounded problems match brute-force vertex enumeration") {
    Rng rng(101);
    int solved = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t m = 2 + rng.below(3);      // 2..4 rows
        const std::size_t n_free = m + 1 + rng.below(3);
        const std::size_t n = n_free + 1;            // one slack bounding the sum
        std::vector<std::vector<double>> A(m + 1, std::vector<double>(n, 0.0));
        std::vector<double> b(m + 1);
        std::vector<double> c(n, 0.0);
        // Random system made feasible by construction at a random point.
        std::vector<double> x0(n_free);
        for (double& v : x0) v = rng.uniform(0.0, 2.0);
        for (std::size_t r = 0; r < m; ++r) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n_free; ++j) {
                A[r][j] = rng.uniform(-1.0, 1.0);
                acc += A[r][j] * x0[j];
            }
            b[r] = acc;
        }
        // sum x + slack = 50 keeps everything bounded.
        for (std::size_t j = 0; j < n_free; ++j) A[m][j] = 1.0;
        A[m][n - 1] = 1.0;
        b[m] = 50.0;
        for (std::size_t j = 0; j < n_free; ++j) c[j] = rng.uniform(-1.0, 1.0);

        const auto sol = lp::solve_standard(A, b, c);
        REQUIRE(sol.status == lp::Status::Optimal);
        const auto reference = brute_force_min(A, b, c);
        REQUIRE(reference.has_value());
        CHECK(sol.value == doctest::Approx(*reference).epsilon(1e-6));

        // Strong duality and dual feasibility for the returned multipliers.
        double dual_value = 0.0;
        for (std::size_t r = 0; r <= m; ++r) dual_value += sol.duals[r] * b[r];
        CHECK(dual_value == doctest::Approx(sol.value).epsilon(1e-6));
        for (std::size_t j = 0; j < n; ++j) {
            double aty = 0.0;
            for (std::size_t r = 0; r <= m; ++r) aty += A[r][j] * sol.duals[r];
            CHECK(aty <= c[j] + 1e-7);
        }
        ++solved;
    }
    CHECK(solved == 300);
}
