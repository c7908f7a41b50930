#include "uat/simulator.hpp"

#include <cmath>

#include "uat/errors.hpp"
#include "uat/rng.hpp"

namespace uat {

void NoiseSpec::validate() const {
    if (level < 0.0 || !std::isfinite(level))
        throw ValidationError("noise: level must be nonnegative and finite");
}

SimulationResult simulate_measurement(const AttenuationImage& alpha, const RayPathMatrix& paths,
                                      const AcquisitionGeometry& geom, const MediaSet& media,
                                      const NoiseSpec& noise) {
    alpha.validate();
    geom.validate();
    noise.validate();
    media.water.validate();
    media.tissue.validate();
    media.reflector.validate();
    if (paths.cols() != alpha.values.size())
        throw ValidationError("simulate: attenuation image does not match the path matrix columns");
    if (paths.rows() != geom.pair_count())
        throw ValidationError("simulate: path matrix rows do not match the pair count");
    if (!grid_matches_geometry(alpha.grid, geom))
        throw ValidationError("simulate: image grid does not span the acquisition domain");

    const std::size_t m = paths.rows();
    // Water-bath integrals go through the same discrete operator as the
    // tissue integrals, so a tissue map equal to water reproduces the water
    // matrix bit for bit.
    const std::vector<double> water_map(alpha.values.size(), media.water.attenuation);
    const std::vector<double> tissue_integrals = paths.multiply(alpha.values);
    const std::vector<double> water_integrals = paths.multiply(water_map);

    const ReflectionPair water_plate{media.water, media.reflector};
    const ReflectionPair tissue_plate{media.tissue, media.reflector};

    SimulationResult out;
    out.tissue.n_elements = geom.n_elements;
    out.tissue.values.resize(m);
    out.tissue.medium_label = "tissue";
    out.tissue.reflector_depth = geom.reflector_depth;
    out.water = out.tissue;
    out.water.medium_label = "water";

    std::vector<double> log_ratio(m);
    const auto rays = all_rays(geom);
    for (std::size_t i = 0; i < m; ++i) {
        const double theta = rays[i].incidence_angle;
        const double r_water = std::abs(reflection_coefficient(water_plate, theta));
        const double r_tissue = std::abs(reflection_coefficient(tissue_plate, theta));
        out.tissue.values[i] = forward_amplitude(tissue_integrals[i], r_tissue);
        out.water.values[i] = forward_amplitude(water_integrals[i], r_water);
        log_ratio[i] = std::log((out.tissue.values[i] * r_water) / (out.water.values[i] * r_tissue));
    }

    double scale = 0.0;
    for (double b : log_ratio) scale = std::max(scale, std::abs(b));
    out.reference_scale = scale;
    out.noise_sigma = noise.level * scale;

    if (out.noise_sigma > 0.0) {
        const CounterRng rng(noise.seed);
        for (std::size_t i = 0; i < m; ++i)
            out.tissue.values[i] *= std::exp(out.noise_sigma * rng.normal(i));
    }
    return out;
}

}  // namespace uat
