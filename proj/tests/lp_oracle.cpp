#include "lp_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace uat::test {

namespace {

constexpr double kPivotTol = 1e-9;

// Tableau rows: [structural | slack | artificial | rhs]; one basic column per
// row. Minimization; entering rule and ratio ties follow Bland to rule out
// cycling on degenerate vertices.
struct Tableau {
    std::size_t n_cols = 0;  // without rhs
    std::vector<std::vector<double>> rows;
    std::vector<double> objective;  // reduced costs, entry n_cols is -value
    std::vector<std::size_t> basis;

    void pivot(std::size_t pivot_row, std::size_t pivot_col) {
        auto& prow = rows[pivot_row];
        const double scale = prow[pivot_col];
        for (double& v : prow) v /= scale;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row) continue;
            const double factor = rows[r][pivot_col];
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c <= n_cols; ++c) rows[r][c] -= factor * prow[c];
        }
        const double obj_factor = objective[pivot_col];
        if (obj_factor != 0.0)
            for (std::size_t c = 0; c <= n_cols; ++c) objective[c] -= obj_factor * prow[c];
        basis[pivot_row] = pivot_col;
    }

    // Returns false once no reduced cost is negative.
    bool iterate(const std::vector<bool>& allowed) {
        std::size_t entering = n_cols;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (allowed[c] && objective[c] < -kPivotTol) {
                entering = c;
                break;  // Bland: lowest index
            }
        }
        if (entering == n_cols) return false;

        std::size_t leaving = rows.size();
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double coef = rows[r][entering];
            if (coef <= kPivotTol) continue;
            const double ratio = rows[r][n_cols] / coef;
            if (ratio < best_ratio - 1e-15 ||
                (ratio <= best_ratio + 1e-15 && (leaving == rows.size() || basis[r] < basis[leaving]))) {
                best_ratio = ratio;
                leaving = r;
            }
        }
        if (leaving == rows.size())
            throw std::runtime_error("lp oracle: unbounded problem");
        pivot(leaving, entering);
        return true;
    }
};

}  // namespace

LpResult solve_lp(const DenseLp& lp) {
    const std::size_t m = lp.rows.size();
    const std::size_t n = lp.n_vars;
    if (lp.rhs.size() != m || lp.cost.size() != n)
        throw std::runtime_error("lp oracle: inconsistent problem sizes");

    // Count artificials: rows whose rhs is negative after adding the slack.
    std::vector<bool> needs_artificial(m, false);
    std::size_t n_art = 0;
    for (std::size_t r = 0; r < m; ++r)
        if (lp.rhs[r] < 0.0) {
            needs_artificial[r] = true;
            ++n_art;
        }

    Tableau t;
    t.n_cols = n + m + n_art;
    t.rows.assign(m, std::vector<double>(t.n_cols + 1, 0.0));
    t.basis.assign(m, 0);

    std::size_t art = 0;
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = needs_artificial[r] ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) t.rows[r][c] = sign * lp.rows[r][c];
        t.rows[r][n + r] = sign;  // slack
        t.rows[r][t.n_cols] = sign * lp.rhs[r];
        if (needs_artificial[r]) {
            t.rows[r][n + m + art] = 1.0;
            t.basis[r] = n + m + art;
            ++art;
        } else {
            t.basis[r] = n + r;
        }
    }

    std::vector<bool> allowed(t.n_cols, true);
    std::size_t guard = 0;
    const std::size_t max_pivots = 2000 * (m + t.n_cols);
    auto run = [&](const std::vector<bool>& mask) {
        while (t.iterate(mask))
            if (++guard > max_pivots) throw std::runtime_error("lp oracle: pivot limit exceeded");
    };

    if (n_art > 0) {
        // Phase 1: minimize the artificial sum.
        t.objective.assign(t.n_cols + 1, 0.0);
        for (std::size_t c = n + m; c < t.n_cols; ++c) t.objective[c] = 1.0;
        for (std::size_t r = 0; r < m; ++r)
            if (t.basis[r] >= n + m)
                for (std::size_t c = 0; c <= t.n_cols; ++c) t.objective[c] -= t.rows[r][c];
        run(allowed);
        if (-t.objective[t.n_cols] > 1e-7)
            throw std::runtime_error("lp oracle: infeasible problem");
        // Kick leftover degenerate artificials out of the basis.
        for (std::size_t r = 0; r < m; ++r) {
            if (t.basis[r] < n + m) continue;
            std::size_t c = 0;
            for (; c < n + m; ++c)
                if (std::abs(t.rows[r][c]) > kPivotTol) break;
            if (c < n + m) t.pivot(r, c);
        }
        for (std::size_t c = n + m; c < t.n_cols; ++c) allowed[c] = false;
    }

    // Phase 2 objective from the original costs and the current basis.
    t.objective.assign(t.n_cols + 1, 0.0);
    for (std::size_t c = 0; c < n; ++c) t.objective[c] = lp.cost[c];
    for (std::size_t r = 0; r < m; ++r) {
        const std::size_t b = t.basis[r];
        const double cb = b < n ? lp.cost[b] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t c = 0; c <= t.n_cols; ++c) t.objective[c] -= cb * t.rows[r][c];
    }
    run(allowed);

    LpResult result;
    result.optimal = true;
    result.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis[r] < n) result.x[t.basis[r]] = t.rows[r][t.n_cols];
    result.objective = 0.0;
    for (std::size_t c = 0; c < n; ++c) result.objective += lp.cost[c] * result.x[c];
    return result;
}

LpResult l1_lp_optimum(const uat::SparseMatrix& data_op, const std::vector<double>& offset,
                       const uat::SparseMatrix& reg_op, double lambda) {
    const std::size_t n = data_op.cols();
    const std::size_t m = data_op.rows();
    const std::size_t k = reg_op.rows();
    if (offset.size() != m || (k > 0 && reg_op.cols() != n))
        throw std::runtime_error("lp oracle: inconsistent operator sizes");

    // Variables: [a+ (n) | a- (n) | u (m) | v (k)], all nonnegative.
    DenseLp lp;
    lp.n_vars = 2 * n + m + k;
    lp.cost.assign(lp.n_vars, 0.0);
    for (std::size_t i = 0; i < m; ++i) lp.cost[2 * n + i] = 1.0;
    for (std::size_t j = 0; j < k; ++j) lp.cost[2 * n + m + j] = lambda;

    auto add_abs_rows = [&](const uat::SparseMatrix& op, std::size_t row, double rhs_offset,
                            std::size_t bound_var) {
        std::vector<double> pos(lp.n_vars, 0.0), neg(lp.n_vars, 0.0);
        const auto cols = op.row_cols(row);
        const auto vals = op.row_values(row);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto c = static_cast<std::size_t>(cols[i]);
            pos[c] = vals[i];
            pos[n + c] = -vals[i];
            neg[c] = -vals[i];
            neg[n + c] = vals[i];
        }
        pos[bound_var] = -1.0;
        neg[bound_var] = -1.0;
        lp.rows.push_back(std::move(pos));
        lp.rhs.push_back(-rhs_offset);
        lp.rows.push_back(std::move(neg));
        lp.rhs.push_back(rhs_offset);
    };

    for (std::size_t i = 0; i < m; ++i) add_abs_rows(data_op, i, offset[i], 2 * n + i);
    for (std::size_t j = 0; j < k; ++j) add_abs_rows(reg_op, j, 0.0, 2 * n + m + j);

    return solve_lp(lp);
}

}  // namespace uat::test
