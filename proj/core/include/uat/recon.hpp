#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uat/calibration.hpp"
#include "uat/image.hpp"
#include "uat/sparse_matrix.hpp"
#include "uat/system_matrix.hpp"

namespace uat {

/// Per-direction first-difference weights. Diagonal differences default to
/// 1/sqrt(2) so penalty per unit length matches the axis directions.
struct GradientWeights {
    double horizontal = 1.0;
    double vertical = 1.0;
    double diag_down = 0.70710678118654752;  // (r, c) - (r+1, c+1)
    double diag_up = 0.70710678118654752;    // (r, c) - (r+1, c-1)
};

/// Stacked directional difference operator: one row per interior-adjacent
/// cell pair, entries (+kappa, -kappa); no wraparound. Annihilates constants.
struct RegularizerMatrix {
    SparseMatrix matrix;
    GradientWeights weights;

    std::size_t rows() const { return matrix.rows(); }
};

RegularizerMatrix build_regularizer(const ImagingGrid& grid, const GradientWeights& weights = {});

struct ReconConfig {
    double lambda = 0.6;
    GradientWeights weights{};
    double smoothing_scale = 1e-6;   // epsilon = smoothing_scale * median|b|
    double smoothing_floor = 1e-18;  // absolute lower bound on epsilon (Np)
    std::size_t max_iterations = 2000;
    double gradient_tolerance = 1e-8;  // relative to the gradient norm at alpha = 0
    double progress_tolerance = 1e-8;  // objective decrease per 25-step window, relative
    std::size_t lbfgs_memory = 20;
    bool continuation = true;  // anneal epsilon over decades before the final solve

    void validate() const;
};

struct SolveReport {
    bool converged = false;
    std::string status;  // converged | max-iterations | line-search-stalled
    std::size_t iterations = 0;
    std::size_t stages = 0;
    double lambda = 0.0;
    double epsilon = 0.0;             // final smoothing width (Np)
    double final_objective = 0.0;     // smoothed objective at the final epsilon
    double final_gradient_norm = 0.0;
    double data_term_l1 = 0.0;        // exact |.|_1 terms at the solution
    double regularizer_term_l1 = 0.0;
    double objective_l1 = 0.0;
    std::vector<double> objective_trace;     // accepted iterates, all stages
    std::vector<std::size_t> stage_starts;   // index into objective_trace per stage
};

struct SolveResult {
    AttenuationImage image;
    SolveReport report;
};

/// Smoothed objective sum(sqrt(r^2 + eps^2)) + lambda sum(sqrt(q^2 + eps^2))
/// with r = L alpha + b, q = D alpha, and its exact gradient.
std::pair<double, std::vector<double>> objective(std::span<const double> alpha,
                                                 const SparseMatrix& paths,
                                                 std::span<const double> b,
                                                 const SparseMatrix& regularizer, double lambda,
                                                 double epsilon);

/// Minimizes |L alpha + b|_1 + lambda |D alpha|_1 through its smooth
/// surrogate: limited-memory quasi-Newton descent with a backtracking line
/// search from a zero start. Deterministic; returns the best iterate with a
/// flagged report when the iteration budget runs out.
SolveResult solve(const RayPathMatrix& paths, const NormalizedData& data, const ImagingGrid& grid,
                  const ReconConfig& config = {});

}  // namespace uat
