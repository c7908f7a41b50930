#pragma once

#include "uat/image.hpp"

namespace uat {

struct RegionStats {
    double mean_inclusion = 0.0;
    double mean_background = 0.0;
    double std_inclusion = 0.0;   // population
    double std_background = 0.0;  // population
};

struct MetricsReport {
    double crf = 0.0;
    double cnr = 0.0;
    double rmse = 0.0;
    double psnr = 0.0;
    RegionStats stats;
    bool cnr_degenerate = false;  // both regions constant with equal means (0/0 -> 0)
    bool psnr_infinite = false;   // zero RMSE
};

/// Population means/stds over the mask and its complement. Requires at least
/// one cell on each side.
RegionStats region_stats(const AttenuationImage& image, const RegionMask& mask);

/// Contrast C = 2|mu_inc - mu_bkg| / (|mu_inc| + |mu_bkg|); 0 when both means vanish.
double contrast(double mean_inclusion, double mean_background);

/// Contrast-ratio fraction, reconstructed contrast over true contrast.
/// Throws when the true contrast is zero.
double crf(const AttenuationImage& recon, const AttenuationImage& truth, const RegionMask& mask);

/// |mu_inc - mu_bkg| / sqrt(var_inc + var_bkg); 0 for the 0/0 degenerate case
/// (flagged through `degenerate` when given), +inf for nonzero contrast over
/// constant regions.
double cnr(const AttenuationImage& image, const RegionMask& mask, bool* degenerate = nullptr);

double rmse(const AttenuationImage& recon, const AttenuationImage& truth);

/// 20 log10(max(recon) / RMSE); +inf when the images agree exactly.
double psnr(const AttenuationImage& recon, const AttenuationImage& truth);

MetricsReport evaluate_metrics(const AttenuationImage& recon, const AttenuationImage& truth,
                               const RegionMask& mask);

/// Mask of cells strictly above the threshold.
RegionMask threshold_mask(const AttenuationImage& image, double threshold);

/// Number of 4-connected components with at least min_cells cells.
std::size_t connected_components(const RegionMask& mask, std::size_t min_cells = 1);

}  // namespace uat
