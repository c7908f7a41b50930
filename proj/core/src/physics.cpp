#include "uat/physics.hpp"

#include <cmath>

#include "uat/errors.hpp"

namespace uat {

double neper_to_decibel() {
    static const double k = 20.0 / std::log(10.0);
    return k;
}

double np_per_m_to_db_per_cm(double alpha_np_m) {
    return alpha_np_m * (neper_to_decibel() / 100.0);
}

double db_per_cm_to_np_per_m(double alpha_db_cm) {
    return alpha_db_cm * (100.0 / neper_to_decibel());
}

void MediumSpec::validate() const {
    if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
        throw ValidationError("medium: speed of sound must be positive and finite");
    if (!(density > 0.0) || !std::isfinite(density))
        throw ValidationError("medium: density must be positive and finite");
    if (attenuation < 0.0 || !std::isfinite(attenuation))
        throw ValidationError("medium: attenuation must be nonnegative and finite");
}

double reflection_coefficient(const ReflectionPair& pair, double incidence_angle) {
    pair.medium.validate();
    pair.reflector.validate();
    const double m = pair.density_ratio();
    const double n = pair.speed_ratio();
    const double s = std::sin(incidence_angle);
    const double c = std::cos(incidence_angle);
    const double disc = 1.0 - (s * s) / (n * n);
    if (disc < 0.0)
        throw ValidationError("reflection_coefficient: incidence beyond the critical angle");
    const double root = n * std::sqrt(disc);
    return (m * c - root) / (m * c + root);
}

double forward_amplitude(double path_integral_np, double reflection_coefficient,
                         double initial_amplitude, double sensitivity) {
    if (path_integral_np < 0.0 || !std::isfinite(path_integral_np))
        throw ValidationError("forward_amplitude: path integral must be nonnegative and finite");
    return initial_amplitude * sensitivity * std::abs(reflection_coefficient) * std::exp(-path_integral_np);
}

MediumSpec water_at_20c() {
    return MediumSpec{1482.5, 1000.0, 5.0};
}

MediumSpec plexiglas() {
    return MediumSpec{2700.0, 1180.0, 0.0};
}

MediumSpec tissue_default() {
    MediumSpec tissue = water_at_20c();
    tissue.attenuation = 0.0;
    return tissue;
}

}  // namespace uat
