#include "uat/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "uat/errors.hpp"

namespace uat {

namespace {

void check_same_grid(const ImagingGrid& a, const ImagingGrid& b, const char* what) {
    if (a.n_axial != b.n_axial || a.n_lateral != b.n_lateral)
        throw ValidationError(std::string(what) + ": grid dimensions differ");
}

}  // namespace

RegionStats region_stats(const AttenuationImage& image, const RegionMask& mask) {
    image.validate();
    mask.validate();
    check_same_grid(image.grid, mask.grid, "region_stats");
    const std::size_t n_inc = mask.count_inside();
    const std::size_t n_bkg = mask.inside.size() - n_inc;
    if (n_inc == 0 || n_bkg == 0)
        throw ValidationError("region_stats: mask must contain inclusion and background cells");

    double sum_inc = 0.0, sum_bkg = 0.0;
    for (std::size_t i = 0; i < image.values.size(); ++i)
        (mask.inside[i] ? sum_inc : sum_bkg) += image.values[i];
    RegionStats stats;
    stats.mean_inclusion = sum_inc / static_cast<double>(n_inc);
    stats.mean_background = sum_bkg / static_cast<double>(n_bkg);

    double ss_inc = 0.0, ss_bkg = 0.0;
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        if (mask.inside[i]) {
            const double d = image.values[i] - stats.mean_inclusion;
            ss_inc += d * d;
        } else {
            const double d = image.values[i] - stats.mean_background;
            ss_bkg += d * d;
        }
    }
    stats.std_inclusion = std::sqrt(ss_inc / static_cast<double>(n_inc));
    stats.std_background = std::sqrt(ss_bkg / static_cast<double>(n_bkg));
    return stats;
}

double contrast(double mean_inclusion, double mean_background) {
    const double denom = std::abs(mean_inclusion) + std::abs(mean_background);
    if (denom == 0.0) return 0.0;
    return 2.0 * std::abs(mean_inclusion - mean_background) / denom;
}

double crf(const AttenuationImage& recon, const AttenuationImage& truth, const RegionMask& mask) {
    check_same_grid(recon.grid, truth.grid, "crf");
    const RegionStats rs = region_stats(recon, mask);
    const RegionStats ts = region_stats(truth, mask);
    const double c_true = contrast(ts.mean_inclusion, ts.mean_background);
    if (c_true == 0.0)
        throw ValidationError("crf: ground truth has zero contrast");
    return contrast(rs.mean_inclusion, rs.mean_background) / c_true;
}

double cnr(const AttenuationImage& image, const RegionMask& mask, bool* degenerate) {
    const RegionStats s = region_stats(image, mask);
    if (degenerate) *degenerate = false;
    const double num = std::abs(s.mean_inclusion - s.mean_background);
    const double denom = std::sqrt(s.std_inclusion * s.std_inclusion + s.std_background * s.std_background);
    if (denom == 0.0) {
        if (num == 0.0) {
            if (degenerate) *degenerate = true;
            return 0.0;
        }
        return std::numeric_limits<double>::infinity();
    }
    return num / denom;
}

double rmse(const AttenuationImage& recon, const AttenuationImage& truth) {
    check_same_grid(recon.grid, truth.grid, "rmse");
    recon.validate();
    truth.validate();
    double ss = 0.0;
    for (std::size_t i = 0; i < recon.values.size(); ++i) {
        const double d = recon.values[i] - truth.values[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(recon.values.size()));
}

double psnr(const AttenuationImage& recon, const AttenuationImage& truth) {
    const double err = rmse(recon, truth);
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : recon.values) peak = std::max(peak, v);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(peak / err);
}

MetricsReport evaluate_metrics(const AttenuationImage& recon, const AttenuationImage& truth,
                               const RegionMask& mask) {
    MetricsReport report;
    report.stats = region_stats(recon, mask);
    report.crf = crf(recon, truth, mask);
    report.cnr = cnr(recon, mask, &report.cnr_degenerate);
    report.rmse = rmse(recon, truth);
    report.psnr = psnr(recon, truth);
    report.psnr_infinite = !std::isfinite(report.psnr);
    return report;
}

RegionMask threshold_mask(const AttenuationImage& image, double threshold) {
    image.validate();
    RegionMask mask(image.grid);
    for (std::size_t i = 0; i < image.values.size(); ++i)
        mask.inside[i] = image.values[i] > threshold ? 1 : 0;
    return mask;
}

std::size_t connected_components(const RegionMask& mask, std::size_t min_cells) {
    mask.validate();
    const std::size_t n1 = mask.grid.n_axial;
    const std::size_t n2 = mask.grid.n_lateral;
    std::vector<std::uint8_t> seen(mask.inside.size(), 0);
    std::vector<std::size_t> stack;
    std::size_t components = 0;

    for (std::size_t start = 0; start < mask.inside.size(); ++start) {
        if (!mask.inside[start] || seen[start]) continue;
        std::size_t cells = 0;
        stack.assign(1, start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t cell = stack.back();
            stack.pop_back();
            ++cells;
            const std::size_t r = cell / n2;
            const std::size_t c = cell % n2;
            const std::size_t neighbors[4] = {
                r > 0 ? cell - n2 : cell,
                r + 1 < n1 ? cell + n2 : cell,
                c > 0 ? cell - 1 : cell,
                c + 1 < n2 ? cell + 1 : cell,
            };
            for (std::size_t nb : neighbors) {
                if (nb != cell && mask.inside[nb] && !seen[nb]) {
                    seen[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
        if (cells >= min_cells) ++components;
    }
    return components;
}

}  // namespace uat
