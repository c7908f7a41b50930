#pragma once

namespace uat {

/// Np -> dB factor, 20/ln(10) ~= 8.6859.
double neper_to_decibel();

double np_per_m_to_db_per_cm(double alpha_np_m);
double db_per_cm_to_np_per_m(double alpha_db_cm);

/// Homogeneous acoustic medium. Attenuation is a frequency-independent
/// scalar; the pipeline operates at a single center frequency.
struct MediumSpec {
    double speed_of_sound = 0.0;  // m/s
    double density = 0.0;         // kg/m^3
    double attenuation = 0.0;     // Np/m

    void validate() const;
};

/// Medium/reflector interface with the ratios the reflection formula needs.
struct ReflectionPair {
    MediumSpec medium;
    MediumSpec reflector;

    double speed_ratio() const { return reflector.speed_of_sound / medium.speed_of_sound; }   // n
    double density_ratio() const { return reflector.density / medium.density; }               // m
};

/// Plane-wave amplitude reflection coefficient at the plate interface,
///   R(theta) = (m cos t - n sqrt(1 - sin^2 t / n^2)) / (m cos t + n sqrt(1 - sin^2 t / n^2)).
/// Throws ValidationError past the critical angle (1 - sin^2/n^2 < 0). The
/// sign convention follows the formula as stated; amplitude pipelines use
/// |R| only, since envelope detection discards sign.
double reflection_coefficient(const ReflectionPair& pair, double incidence_angle);

/// Echo amplitude after a round trip: A0 * S * |R| * exp(-path_integral).
/// path_integral is the attenuation line integral in Np and must be >= 0.
double forward_amplitude(double path_integral_np, double reflection_coefficient,
                         double initial_amplitude = 1.0, double sensitivity = 1.0);

// Literature constants (distilled water at 20 C, 5 MHz; cast plexiglas).
MediumSpec water_at_20c();   // c = 1482.5 m/s, rho = 1000 kg/m^3, alpha = 5 Np/m (0.05 Np/cm)
MediumSpec plexiglas();      // c = 2700 m/s, rho = 1180 kg/m^3
MediumSpec tissue_default(); // rho ~= water; speed defaults to water's when unknown

}  // namespace uat
