#pragma once

#include <cstdint>

#include "uat/calibration.hpp"
#include "uat/image.hpp"
#include "uat/system_matrix.hpp"

namespace uat {

/// Gaussian measurement noise, expressed as a fraction of the largest
/// magnitude in the noiseless normalized log-ratio matrix.
struct NoiseSpec {
    double level = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MediaSet {
    MediumSpec water;
    MediumSpec tissue;
    MediumSpec reflector;
};

struct SimulationResult {
    AmplitudeMatrix tissue;  // forward model through the input attenuation map
    AmplitudeMatrix water;   // same geometry through uniform water attenuation
    double noise_sigma = 0.0;       // std dev applied in the log-ratio domain (Np)
    double reference_scale = 0.0;   // max |b| the level was scaled by (Np)
};

/// Ray-based Beer-Lambert forward simulation of a multistatic acquisition.
///
/// Both matrices carry unit transmit amplitude and sensitivity and the
/// |R(theta)| factor of their respective medium/reflector interface. Noise is
/// drawn in the normalized log-ratio domain, sigma = level * max|b|, and
/// folded multiplicatively into the tissue amplitudes, so the output files
/// keep the plain amplitude format. Deterministic given the seed.
SimulationResult simulate_measurement(const AttenuationImage& alpha, const RayPathMatrix& paths,
                                      const AcquisitionGeometry& geom, const MediaSet& media,
                                      const NoiseSpec& noise);

}  // namespace uat
