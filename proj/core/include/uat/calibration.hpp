#pragma once

#include <string>
#include <vector>

#include "uat/geometry.hpp"
#include "uat/physics.hpp"

namespace uat {

/// Reflector-echo amplitudes for all n^2 Tx/Rx pairs, row-major by (t, r).
/// Entries are linear envelope amplitudes and must be strictly positive.
struct AmplitudeMatrix {
    std::size_t n_elements = 0;
    std::vector<double> values;
    std::string medium_label;
    double reflector_depth = 0.0;  // m

    double at(std::size_t t, std::size_t r) const { return values[t * n_elements + r]; }
    double& at(std::size_t t, std::size_t r) { return values[t * n_elements + r]; }

    void validate() const;
};

/// Calibrated log-ratio data vector b (Np), length M = n^2, row-major (t, r).
/// In absolute mode -b is the per-ray path integral of tissue attenuation;
/// otherwise it is the attenuation relative to the water bath.
struct NormalizedData {
    AcquisitionGeometry geometry;
    std::vector<double> b;
    bool absolute = true;

    std::size_t size() const { return b.size(); }
};

/// Log-ratio normalization with per-angle reflection-coefficient correction:
///   b_{t,r} = ln( A_meas |R_water(theta)| / (A_calib |R_tissue(theta)|) )
/// and, when `absolute` is set, minus alpha_water * total_length so tissue
/// attenuation comes out on an absolute rather than water-relative scale.
NormalizedData normalize(const AmplitudeMatrix& meas, const AmplitudeMatrix& calib,
                         const MediumSpec& tissue, const MediumSpec& water,
                         const MediumSpec& reflector, const AcquisitionGeometry& geom,
                         bool absolute = true);

/// n x n view of b for display, rows indexed by transmit element.
std::vector<std::vector<double>> reshape_to_matrix(const NormalizedData& data);

}  // namespace uat
