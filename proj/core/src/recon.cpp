#include "uat/recon.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "uat/errors.hpp"
#include "uat/physics.hpp"

namespace uat {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double median_abs(std::span<const double> v) {
    if (v.empty()) return 0.0;
    std::vector<double> mags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
    const std::size_t mid = mags.size() / 2;
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
    return mags[mid];
}

// Objective evaluation with reusable residual buffers. value() leaves the
// residuals for the evaluated point behind, so the gradient of an accepted
// line-search point costs only the two transpose products.
struct Objective {
    const SparseMatrix& paths;
    std::span<const double> b;
    const SparseMatrix& reg;
    double lambda;
    double epsilon;

    std::vector<double> residual;   // L alpha + b
    std::vector<double> gradient_r; // D alpha
    std::vector<double> scratch;

    Objective(const SparseMatrix& paths_, std::span<const double> b_, const SparseMatrix& reg_,
              double lambda_, double epsilon_)
        : paths(paths_), b(b_), reg(reg_), lambda(lambda_), epsilon(epsilon_),
          residual(paths_.rows()), gradient_r(reg_.rows()) {}

    double value(std::span<const double> alpha) {
        paths.apply(alpha, residual);
        for (std::size_t i = 0; i < residual.size(); ++i) residual[i] += b[i];
        double f = 0.0;
        const double e2 = epsilon * epsilon;
        for (double r : residual) f += std::sqrt(r * r + e2);
        if (!reg.rows()) return f;
        reg.apply(alpha, gradient_r);
        double g = 0.0;
        for (double q : gradient_r) g += std::sqrt(q * q + e2);
        return f + lambda * g;
    }

    // Gradient at the point whose residuals are currently cached.
    void gradient_from_cache(std::span<double> grad) {
        const double e2 = epsilon * epsilon;
        scratch.resize(residual.size());
        for (std::size_t i = 0; i < residual.size(); ++i)
            scratch[i] = residual[i] / std::sqrt(residual[i] * residual[i] + e2);
        paths.apply_transpose(scratch, grad);
        if (!reg.rows()) return;
        scratch.resize(gradient_r.size());
        for (std::size_t i = 0; i < gradient_r.size(); ++i)
            scratch[i] = lambda * gradient_r[i] / std::sqrt(gradient_r[i] * gradient_r[i] + e2);
        std::vector<double> reg_grad(grad.size());
        reg.apply_transpose(scratch, reg_grad);
        for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += reg_grad[i];
    }
};

struct LbfgsMemory {
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs;  // (s, y)
    std::size_t capacity = 10;

    void push(std::vector<double> s, std::vector<double> y) {
        if (pairs.size() == capacity) pairs.pop_front();
        pairs.emplace_back(std::move(s), std::move(y));
    }
    void clear() { pairs.clear(); }

    // Two-loop recursion: direction = -H grad.
    std::vector<double> direction(std::span<const double> grad) const {
        std::vector<double> q(grad.begin(), grad.end());
        if (pairs.empty()) {
            for (double& v : q) v = -v;
            return q;
        }
        std::vector<double> alpha_coef(pairs.size());
        for (std::size_t k = pairs.size(); k-- > 0;) {
            const auto& [s, y] = pairs[k];
            const double rho = 1.0 / dot(s, y);
            alpha_coef[k] = rho * dot(s, q);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha_coef[k] * y[i];
        }
        const auto& [s_last, y_last] = pairs.back();
        const double gamma = dot(s_last, y_last) / dot(y_last, y_last);
        for (double& v : q) v *= gamma;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            const auto& [s, y] = pairs[k];
            const double rho = 1.0 / dot(s, y);
            const double beta = rho * dot(y, q);
            for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha_coef[k] - beta) * s[i];
        }
        for (double& v : q) v = -v;
        return q;
    }
};

struct StageResult {
    double objective = 0.0;
    double gradient_norm = 0.0;
    bool reached_tolerance = false;
    bool progress_exhausted = false;
    bool stalled = false;
};

// One quasi-Newton descent at fixed epsilon. Consumes the shared iteration
// budget and appends accepted objective values to the trace. Stops on the
// gradient threshold or when the objective decrease over a 25-step window
// drops below the progress tolerance.
StageResult run_stage(Objective& obj, std::vector<double>& x, double gradient_threshold,
                      double progress_tolerance, std::size_t& iterations_left, std::size_t memory,
                      SolveReport& report) {
    StageResult result;
    const std::size_t n = x.size();
    constexpr std::size_t kProgressWindow = 25;
    std::deque<double> recent;

    double f = obj.value(x);
    std::vector<double> grad(n);
    obj.gradient_from_cache(grad);
    double gnorm = norm2(grad);
    report.objective_trace.push_back(f);

    LbfgsMemory lbfgs;
    lbfgs.capacity = memory;

    constexpr double kArmijo = 1e-4;
    bool first_step = true;

    while (iterations_left > 0) {
        if (gnorm <= gradient_threshold) {
            result.reached_tolerance = true;
            break;
        }
        std::vector<double> dir = lbfgs.direction(grad);
        double slope = dot(grad, dir);
        if (!(slope < 0.0)) {  // not a descent direction; restart from steepest descent
            lbfgs.clear();
            dir.assign(grad.begin(), grad.end());
            for (double& v : dir) v = -v;
            slope = -gnorm * gnorm;
        }

        double step = first_step ? 1.0 / std::max(gnorm, 1.0) : 1.0;
        std::vector<double> x_new(n);
        double f_new = f;
        bool accepted = false;
        for (int trial = 0; trial < 60; ++trial) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
            f_new = obj.value(x_new);
            if (std::isfinite(f_new) && f_new <= f + kArmijo * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            result.stalled = true;
            break;
        }
        first_step = false;

        std::vector<double> grad_new(n);
        obj.gradient_from_cache(grad_new);

        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = grad_new[i] - grad[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * norm2(s) * norm2(y))
            lbfgs.push(std::move(s), std::move(y));

        x.swap(x_new);
        f = f_new;
        grad.swap(grad_new);
        gnorm = norm2(grad);
        report.objective_trace.push_back(f);
        ++report.iterations;
        --iterations_left;

        recent.push_back(f);
        if (recent.size() > kProgressWindow) recent.pop_front();
        if (recent.size() == kProgressWindow &&
            recent.front() - f <= progress_tolerance * std::max(1.0, std::abs(f))) {
            result.progress_exhausted = true;
            break;
        }
    }

    result.objective = f;
    result.gradient_norm = gnorm;
    if (gnorm <= gradient_threshold) result.reached_tolerance = true;
    return result;
}

}  // namespace

void ReconConfig::validate() const {
    if (lambda < 0.0 || !std::isfinite(lambda))
        throw ValidationError("recon: lambda must be nonnegative and finite");
    if (!(smoothing_scale > 0.0) || !(smoothing_floor > 0.0))
        throw ValidationError("recon: smoothing parameters must be positive");
    if (max_iterations < 1)
        throw ValidationError("recon: max_iterations must be at least 1");
    if (!(gradient_tolerance > 0.0))
        throw ValidationError("recon: gradient tolerance must be positive");
    if (progress_tolerance < 0.0)
        throw ValidationError("recon: progress tolerance must be nonnegative");
    if (lbfgs_memory < 1)
        throw ValidationError("recon: lbfgs memory must be at least 1");
}

RegularizerMatrix build_regularizer(const ImagingGrid& grid, const GradientWeights& weights) {
    grid.validate();
    // Difference entries carry a Np/m -> dB/cm factor so the default lambda
    // penalizes image gradients on the reporting scale; with bare +-kappa
    // rows on Np/m values the regularizer overwhelms the data term and the
    // minimizer collapses to a flat image.
    const double unit = np_per_m_to_db_per_cm(1.0);
    GradientWeights scaled = weights;
    scaled.horizontal *= unit;
    scaled.vertical *= unit;
    scaled.diag_down *= unit;
    scaled.diag_up *= unit;
    const std::size_t n1 = grid.n_axial;
    const std::size_t n2 = grid.n_lateral;

    const std::size_t n_h = n1 * (n2 >= 1 ? n2 - 1 : 0);
    const std::size_t n_v = (n1 >= 1 ? n1 - 1 : 0) * n2;
    const std::size_t n_d = (n1 >= 1 ? n1 - 1 : 0) * (n2 >= 1 ? n2 - 1 : 0);

    SparseMatrix::Builder builder(n_h + n_v + 2 * n_d, grid.cell_count());
    SparseMatrix::Entry row[2];
    auto idx = [&](std::size_t r, std::size_t c) { return static_cast<std::int32_t>(grid.cell_index(r, c)); };

    for (std::size_t r = 0; r < n1; ++r)
        for (std::size_t c = 0; c + 1 < n2; ++c) {
            row[0] = {idx(r, c), scaled.horizontal};
            row[1] = {idx(r, c + 1), -scaled.horizontal};
            builder.append_row(row);
        }
    for (std::size_t r = 0; r + 1 < n1; ++r)
        for (std::size_t c = 0; c < n2; ++c) {
            row[0] = {idx(r, c), scaled.vertical};
            row[1] = {idx(r + 1, c), -scaled.vertical};
            builder.append_row(row);
        }
    for (std::size_t r = 0; r + 1 < n1; ++r)
        for (std::size_t c = 0; c + 1 < n2; ++c) {
            row[0] = {idx(r, c), scaled.diag_down};
            row[1] = {idx(r + 1, c + 1), -scaled.diag_down};
            builder.append_row(row);
        }
    for (std::size_t r = 0; r + 1 < n1; ++r)
        for (std::size_t c = 1; c < n2; ++c) {
            row[0] = {idx(r, c), scaled.diag_up};
            row[1] = {idx(r + 1, c - 1), -scaled.diag_up};
            builder.append_row(row);
        }

    return RegularizerMatrix{builder.finish(), weights};
}

std::pair<double, std::vector<double>> objective(std::span<const double> alpha,
                                                 const SparseMatrix& paths,
                                                 std::span<const double> b,
                                                 const SparseMatrix& regularizer, double lambda,
                                                 double epsilon) {
    if (alpha.size() != paths.cols() || b.size() != paths.rows())
        throw ValidationError("objective: dimension mismatch");
    if (regularizer.rows() > 0 && regularizer.cols() != alpha.size())
        throw ValidationError("objective: regularizer does not match the image size");
    Objective obj(paths, b, regularizer, lambda, epsilon);
    const double value = obj.value(alpha);
    std::vector<double> grad(alpha.size());
    obj.gradient_from_cache(grad);
    return {value, std::move(grad)};
}

SolveResult solve(const RayPathMatrix& paths, const NormalizedData& data, const ImagingGrid& grid,
                  const ReconConfig& config) {
    config.validate();
    grid.validate();
    if (data.b.size() != paths.rows())
        throw ValidationError("solve: data length does not match the path matrix");
    if (grid.cell_count() != paths.cols())
        throw ValidationError("solve: grid does not match the path matrix");
    for (double v : data.b)
        if (!std::isfinite(v))
            throw ValidationError("solve: non-finite value in normalized data");

    const RegularizerMatrix reg = build_regularizer(grid, config.weights);

    SolveResult out;
    out.image = AttenuationImage(grid, 0.0);
    SolveReport& report = out.report;
    report.lambda = config.lambda;

    const double epsilon_final =
        std::max(config.smoothing_scale * median_abs(data.b), config.smoothing_floor);
    report.epsilon = epsilon_final;

    // Reference gradient scale at the zero start.
    std::vector<double>& x = out.image.values;
    {
        Objective probe(paths, data.b, reg.matrix, config.lambda, epsilon_final);
        const double f0 = probe.value(x);
        std::vector<double> g0(x.size());
        probe.gradient_from_cache(g0);
        const double g0_norm = norm2(g0);
        if (g0_norm == 0.0) {
            report.converged = true;
            report.status = "converged";
            report.stages = 0;
            report.final_objective = probe.value(x);
            report.final_gradient_norm = 0.0;
        } else {
            std::vector<double> epsilons;
            if (config.continuation) {
                const double data_scale = std::max(median_abs(data.b), epsilon_final);
                for (double e = epsilon_final * 1e4; e > epsilon_final; e /= 10.0)
                    if (e < 0.1 * data_scale) epsilons.push_back(e);
            }
            epsilons.push_back(epsilon_final);

            // Intermediate stages only need a rough solution to warm-start
            // the next smoothing level; the configured tolerance applies to
            // the final stage alone.
            std::size_t budget = config.max_iterations;
            const std::size_t stage_cap = std::max<std::size_t>(50, config.max_iterations / 10);
            StageResult stage{};
            for (std::size_t k = 0; k < epsilons.size(); ++k) {
                const bool final_stage = (k + 1 == epsilons.size());
                Objective obj(paths, data.b, reg.matrix, config.lambda, epsilons[k]);
                const double threshold =
                    g0_norm * (final_stage ? config.gradient_tolerance : 1e-3);
                const double progress_tol =
                    final_stage ? config.progress_tolerance
                                : std::max(config.progress_tolerance, 1e-6);
                std::size_t stage_budget = final_stage ? budget : std::min(budget, stage_cap);
                report.stage_starts.push_back(report.objective_trace.size());
                const std::size_t before = stage_budget;
                stage = run_stage(obj, x, threshold, progress_tol, stage_budget,
                                  config.lbfgs_memory, report);
                budget -= before - stage_budget;
                ++report.stages;
                if (budget == 0 && !(final_stage && stage.reached_tolerance)) break;
            }

            report.final_objective = stage.objective;
            report.final_gradient_norm = stage.gradient_norm;
            if (stage.reached_tolerance) {
                report.converged = true;
                report.status = "converged";
            } else if (stage.progress_exhausted) {
                report.converged = true;
                report.status = "objective-flat";
            } else if (stage.stalled && report.iterations > 0) {
                // No further descent representable in double precision.
                report.converged = true;
                report.status = "line-search-stalled";
            } else if (stage.stalled) {
                report.converged = false;
                report.status = "no-descent";
            } else if (stage.gradient_norm <= 0.1 * g0_norm || stage.objective <= 0.1 * f0) {
                // Budget completed after substantial descent (the gradient of
                // the smoothed L1 hovers near the kinks long after the
                // objective has settled): the usual termination mode for
                // iterative tomography, reported as such.
                report.converged = true;
                report.status = "iteration-cap";
            } else {
                report.converged = false;
                report.status = "max-iterations";
            }
        }
    }

    // Exact L1 terms at the solution, for reporting.
    {
        const std::vector<double> r = paths.multiply(x);
        double data_term = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) data_term += std::abs(r[i] + data.b[i]);
        const std::vector<double> q = reg.matrix.multiply(x);
        double reg_term = 0.0;
        for (double v : q) reg_term += std::abs(v);
        report.data_term_l1 = data_term;
        report.regularizer_term_l1 = reg_term;
        report.objective_l1 = data_term + config.lambda * reg_term;
    }
    return out;
}

}  // namespace uat
