#include "uat/calibration.hpp"

#include <cmath>

#include "uat/errors.hpp"

namespace uat {

void AmplitudeMatrix::validate() const {
    if (n_elements < 1)
        throw ValidationError("amplitude matrix: empty");
    if (values.size() != n_elements * n_elements)
        throw ValidationError("amplitude matrix: value count must be n_elements^2");
    if (!(reflector_depth > 0.0) || !std::isfinite(reflector_depth))
        throw ValidationError("amplitude matrix: reflector depth must be positive");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("amplitude matrix: nonpositive or non-finite amplitude");
}

NormalizedData normalize(const AmplitudeMatrix& meas, const AmplitudeMatrix& calib,
                         const MediumSpec& tissue, const MediumSpec& water,
                         const MediumSpec& reflector, const AcquisitionGeometry& geom,
                         bool absolute) {
    meas.validate();
    calib.validate();
    geom.validate();
    if (meas.n_elements != calib.n_elements || meas.n_elements != geom.n_elements)
        throw ValidationError("normalize: element counts of measurement, calibration and geometry differ");
    const double depth_slack = 1e-9 * geom.reflector_depth;
    if (std::abs(meas.reflector_depth - geom.reflector_depth) > depth_slack ||
        std::abs(calib.reflector_depth - geom.reflector_depth) > depth_slack)
        throw ValidationError("normalize: reflector depth mismatch between matrices and geometry");

    NormalizedData out;
    out.geometry = geom;
    out.absolute = absolute;
    out.b.resize(geom.pair_count());

    const ReflectionPair water_plate{water, reflector};
    const ReflectionPair tissue_plate{tissue, reflector};
    for (std::size_t t = 0; t < geom.n_elements; ++t) {
        for (std::size_t r = 0; r < geom.n_elements; ++r) {
            const RaySpec ray = ray_for_pair(geom, t, r);
            const double r_water = std::abs(reflection_coefficient(water_plate, ray.incidence_angle));
            const double r_tissue = std::abs(reflection_coefficient(tissue_plate, ray.incidence_angle));
            const std::size_t idx = t * geom.n_elements + r;
            const double num = meas.values[idx] * r_water;
            const double den = calib.values[idx] * r_tissue;
            double b = std::log(num / den);
            if (absolute)
                b -= water.attenuation * ray.total_length;
            out.b[idx] = b;
        }
    }
    return out;
}

std::vector<std::vector<double>> reshape_to_matrix(const NormalizedData& data) {
    const std::size_t n = data.geometry.n_elements;
    if (data.b.size() != n * n)
        throw ValidationError("reshape_to_matrix: data length is not n_elements^2");
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t r = 0; r < n; ++r)
            rows[t][r] = data.b[t * n + r];
    return rows;
}

}  // namespace uat
