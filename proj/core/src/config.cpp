#include "uat/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "uat/errors.hpp"
#include "uat/physics.hpp"

namespace uat {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        throw ValidationError("config: bad numeric value for '" + key + "': '" + value + "'");
    return v;
}

std::size_t to_size(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (v < 0 || v != std::floor(v))
        throw ValidationError("config: '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ValidationError("config: '" + key + "' must be true or false");
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "geometry.n_elements") geometry.n_elements = to_size(key, value);
    else if (key == "geometry.pitch_m") geometry.pitch = to_double(key, value);
    else if (key == "geometry.reflector_depth_m") geometry.reflector_depth = to_double(key, value);
    else if (key == "grid.n_axial") grid_axial = to_size(key, value);
    else if (key == "grid.n_lateral") grid_lateral = to_size(key, value);
    else if (key == "media.water.speed_of_sound_m_s") water.speed_of_sound = to_double(key, value);
    else if (key == "media.water.density_kg_m3") water.density = to_double(key, value);
    else if (key == "media.water.attenuation_db_cm")
        water.attenuation = db_per_cm_to_np_per_m(to_double(key, value));
    else if (key == "media.tissue.speed_of_sound_m_s") {
        tissue.speed_of_sound = to_double(key, value);
        tissue_speed_defaulted = false;
    } else if (key == "media.tissue.density_kg_m3") tissue.density = to_double(key, value);
    else if (key == "media.reflector.speed_of_sound_m_s") reflector.speed_of_sound = to_double(key, value);
    else if (key == "media.reflector.density_kg_m3") reflector.density = to_double(key, value);
    else if (key == "recon.lambda") recon.lambda = to_double(key, value);
    else if (key == "recon.kappa_horizontal") recon.weights.horizontal = to_double(key, value);
    else if (key == "recon.kappa_vertical") recon.weights.vertical = to_double(key, value);
    else if (key == "recon.kappa_diag_down") recon.weights.diag_down = to_double(key, value);
    else if (key == "recon.kappa_diag_up") recon.weights.diag_up = to_double(key, value);
    else if (key == "recon.max_iterations") recon.max_iterations = to_size(key, value);
    else if (key == "recon.gradient_tolerance") recon.gradient_tolerance = to_double(key, value);
    else if (key == "recon.smoothing_scale") recon.smoothing_scale = to_double(key, value);
    else if (key == "recon.continuation") recon.continuation = to_bool(key, value);
    else if (key == "noise.level") noise.level = to_double(key, value);
    else if (key == "noise.seed") noise.seed = static_cast<std::uint64_t>(to_size(key, value));
    else if (key == "sim.oversample") sim_oversample = to_size(key, value);
    else if (key == "calibration.absolute") absolute = to_bool(key, value);
    else if (key == "io.binary") binary_payloads = to_bool(key, value);
    else throw ValidationError("config: unknown key '" + key + "'");
}

void ExperimentConfig::finalize() {
    if (tissue_speed_defaulted)
        tissue.speed_of_sound = water.speed_of_sound;
}

void ExperimentConfig::validate() const {
    geometry.validate();
    if (grid_axial < 1 || grid_lateral < 1)
        throw ValidationError("config: grid must have at least one cell per dimension");
    water.validate();
    tissue.validate();
    reflector.validate();
    recon.validate();
    noise.validate();
    if (sim_oversample < 1)
        throw ValidationError("config: sim.oversample must be at least 1");
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    std::map<std::string, std::string> pairs;
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("'" + path.string() + "': expected 'key = value', got '" + line + "'");
        pairs[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return pairs;
}

void load_config_file(const std::filesystem::path& path, ExperimentConfig& config) {
    for (const auto& [key, value] : read_key_value_file(path))
        config.apply(key, value);
}

}  // namespace uat
