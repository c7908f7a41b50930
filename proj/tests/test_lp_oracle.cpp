#include <doctest.h>

#include <cmath>
#include <limits>

#include "lp_oracle.hpp"
#include "uat/rng.hpp"
#include "uat/sparse_matrix.hpp"

using namespace uat;

namespace {

SparseMatrix dense_rows(std::size_t cols, const std::vector<std::vector<double>>& rows) {
    SparseMatrix::Builder builder(rows.size(), cols);
    std::vector<SparseMatrix::Entry> entries;
    for (const auto& row : rows) {
        entries.clear();
        for (std::size_t c = 0; c < row.size(); ++c)
            if (row[c] != 0.0) entries.push_back({static_cast<std::int32_t>(c), row[c]});
        builder.append_row(entries);
    }
    return builder.finish();
}

}  // namespace

TEST_CASE("plain simplex on textbook problems") {
    SUBCASE("bounded maximization written as minimization") {
        // min -x0 - 2 x1 s.t. x0 + x1 <= 4, x0 <= 3, x1 <= 2 -> x = (2, 2), value -6.
        test::DenseLp lp;
        lp.n_vars = 2;
        lp.rows = {{1, 1}, {1, 0}, {0, 1}};
        lp.rhs = {4, 3, 2};
        lp.cost = {-1, -2};
        const auto result = test::solve_lp(lp);
        REQUIRE(result.optimal);
        CHECK(result.objective == doctest::Approx(-6.0).epsilon(1e-12));
        CHECK(result.x[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(result.x[1] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("negative right-hand sides go through phase one") {
        // min x0 + x1 s.t. -x0 <= -1, -x1 <= -2 -> x = (1, 2), value 3.
        test::DenseLp lp;
        lp.n_vars = 2;
        lp.rows = {{-1, 0}, {0, -1}};
        lp.rhs = {-1, -2};
        lp.cost = {1, 1};
        const auto result = test::solve_lp(lp);
        REQUIRE(result.optimal);
        CHECK(result.objective == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("infeasible") {
        test::DenseLp lp;
        lp.n_vars = 1;
        lp.rows = {{1}, {-1}};
        lp.rhs = {1, -2};  // x <= 1 and x >= 2
        lp.cost = {1};
        CHECK_THROWS(test::solve_lp(lp));
    }
}

TEST_CASE("splitting-variable L1 optimum on hand cases") {
    SUBCASE("single residual") {
        // min |x - 1| -> 0.
        const auto data_op = dense_rows(1, {{1.0}});
        const auto reg = dense_rows(1, {});
        const auto result = test::l1_lp_optimum(data_op, {-1.0}, reg, 0.0);
        CHECK(result.objective == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("data pull against a regularizer") {
        // min |x + 2| + 3 |x| -> 2 at x = 0.
        const auto data_op = dense_rows(1, {{1.0}});
        const auto reg = dense_rows(1, {{1.0}});
        const auto result = test::l1_lp_optimum(data_op, {2.0}, reg, 3.0);
        CHECK(result.objective == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("median regression") {
        // min sum |x - b_i| over b = {0, 1, 4}: optimum at the median, value 4.
        const auto data_op = dense_rows(1, {{1.0}, {1.0}, {1.0}});
        const auto reg = dense_rows(1, {});
        const auto result = test::l1_lp_optimum(data_op, {0.0, -1.0, -4.0}, reg, 0.0);
        CHECK(result.objective == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("two-variable fused pair") {
        // min |x0 - 2| + |x1| + lambda |x0 - x1|; lambda = 3 fuses the pair:
        // x0 = x1 = t, cost |t-2| + |t| minimized on t in [0,2] at value 2.
        const auto data_op = dense_rows(2, {{1.0, 0.0}, {0.0, 1.0}});
        const auto reg = dense_rows(2, {{1.0, -1.0}});
        const auto result = test::l1_lp_optimum(data_op, {-2.0, 0.0}, reg, 3.0);
        CHECK(result.objective == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("oracle against exhaustive search on random two-variable problems") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        CounterRng rng(500 + seed);
        std::uint64_t k = 0;
        std::vector<std::vector<double>> rows(3, std::vector<double>(2));
        std::vector<double> offset(3);
        for (auto& row : rows)
            for (auto& v : row) v = rng.normal(k++);
        for (auto& v : offset) v = rng.normal(k++);
        const auto data_op = dense_rows(2, rows);
        const auto reg = dense_rows(2, {{1.0, -1.0}});
        const double lambda = 0.4;

        const auto lp = test::l1_lp_optimum(data_op, offset, reg, lambda);

        // Brute force on a fine lattice around the origin.
        double best = std::numeric_limits<double>::infinity();
        for (double x0 = -4.0; x0 <= 4.0; x0 += 0.004) {
            for (double x1 = -4.0; x1 <= 4.0; x1 += 0.004) {
                double f = lambda * std::abs(x0 - x1);
                for (std::size_t i = 0; i < 3; ++i)
                    f += std::abs(rows[i][0] * x0 + rows[i][1] * x1 + offset[i]);
                best = std::min(best, f);
            }
        }
        CHECK(lp.objective <= best + 1e-9);
        CHECK(lp.objective >= best - 2e-2);  // lattice resolution
    }
}
