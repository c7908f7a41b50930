#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "uat/geometry.hpp"
#include "uat/recon.hpp"
#include "uat/simulator.hpp"

namespace uat {

/// Aggregated experiment settings: acquisition geometry, media constants,
/// reconstruction grid and solver parameters, and the noise model. Defaults
/// carry the embedded literature constants; a key=value config file overrides
/// them, and command-line flags override the file.
struct ExperimentConfig {
    AcquisitionGeometry geometry{128, 300e-6, 30e-3};
    std::size_t grid_axial = 64;
    std::size_t grid_lateral = 64;

    MediumSpec water = water_at_20c();
    MediumSpec tissue = tissue_default();
    MediumSpec reflector = plexiglas();
    bool tissue_speed_defaulted = true;  // no tissue sound speed given; R ratio is unity

    ReconConfig recon{};
    NoiseSpec noise{};
    std::size_t sim_oversample = 1;  // finer simulation grid factor
    bool absolute = true;            // absolute vs water-relative attenuation
    bool binary_payloads = false;

    ImagingGrid make_recon_grid() const { return make_grid(geometry, grid_axial, grid_lateral); }
    MediaSet media() const { return MediaSet{water, tissue, reflector}; }

    /// Applies one dotted config key (file or CLI provenance). Unknown keys
    /// and malformed values throw ValidationError.
    void apply(const std::string& key, const std::string& value);

    /// Call once all overrides are in: a tissue sound speed that was never
    /// given falls back to the configured water speed, which makes the
    /// reflection-coefficient ratio unity.
    void finalize();

    void validate() const;
};

/// Parses a layered key=value file ('#' comments, blank lines ignored) and
/// applies every entry onto the given config.
void load_config_file(const std::filesystem::path& path, ExperimentConfig& config);

/// Key=value map from a config-style file, preserving nothing but pairs.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

}  // namespace uat
