// uatomo: pulse-echo ultrasound attenuation tomography off a passive
// reflector. Subcommands cover the full pipeline: phantom rasterization,
// ray-based forward simulation, water-bath calibration, L1-regularized
// reconstruction, metric evaluation and the noise-sweep driver.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "uat/config.hpp"
#include "uat/errors.hpp"
#include "uat/io.hpp"
#include "uat/metrics.hpp"
#include "uat/phantom.hpp"
#include "uat/physics.hpp"
#include "uat/recon.hpp"
#include "uat/simulator.hpp"
#include "uat/system_matrix.hpp"

namespace fs = std::filesystem;
using namespace uat;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kValidation = 2,
    kIo = 3,
    kNotConverged = 4,
};

struct CommonArgs {
    std::string config_path;
    std::string output_dir = ".";
    std::vector<std::string> overrides;  // key=value pairs
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    std::size_t oversample = 1;
    bool absolute = false;
    bool relative = false;
    bool binary = false;

    CLI::Option* opt_noise = nullptr;
    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_lambda = nullptr;
    CLI::Option* opt_oversample = nullptr;
    CLI::Option* opt_binary = nullptr;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config file (key = value)")
        ->envname("UATOMO_CONFIG");
    cmd->add_option("--output-dir", args.output_dir, "Directory for output files");
    cmd->add_option("--set", args.overrides, "Override a config key, e.g. --set recon.lambda=0.3");
    args.opt_noise = cmd->add_option("--noise", args.noise_level, "Noise level as a fraction (0.13 = 13%)");
    args.opt_seed = cmd->add_option("--seed", args.seed, "Noise seed");
    args.opt_lambda = cmd->add_option("--lambda", args.lambda, "Regularization weight");
    args.opt_oversample = cmd->add_option("--oversample", args.oversample,
                                          "Simulate on a k-times finer grid than the reconstruction");
    auto* abs_flag = cmd->add_flag("--absolute", args.absolute, "Report absolute attenuation (default)");
    cmd->add_flag("--relative", args.relative, "Report attenuation relative to the water bath")
        ->excludes(abs_flag);
    args.opt_binary = cmd->add_flag("--binary", args.binary, "Binary float64 payloads with .hdr sidecars");
}

ExperimentConfig build_config(const CommonArgs& args) {
    ExperimentConfig config;
    if (!args.config_path.empty()) load_config_file(args.config_path, config);
    for (const auto& pair : args.overrides) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos)
            throw ValidationError("--set expects key=value, got '" + pair + "'");
        config.apply(pair.substr(0, eq), pair.substr(eq + 1));
    }
    if (args.opt_noise->count()) config.noise.level = args.noise_level;
    if (args.opt_seed->count()) config.noise.seed = args.seed;
    if (args.opt_lambda->count()) config.recon.lambda = args.lambda;
    if (args.opt_oversample->count()) config.sim_oversample = args.oversample;
    if (args.absolute) config.absolute = true;
    if (args.relative) config.absolute = false;
    if (args.opt_binary->count()) config.binary_payloads = true;
    config.finalize();
    config.validate();
    return config;
}

fs::path prepare_output_dir(const CommonArgs& args) {
    fs::path dir(args.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void warn_if_tissue_defaulted(const ExperimentConfig& config) {
    if (config.tissue_speed_defaulted)
        std::cerr << "note: tissue sound speed not configured; using the water value, so the"
                     " reflection-coefficient ratio is unity\n";
}

AttenuationImage image_in_db_cm(const AttenuationImage& image) {
    AttenuationImage out = image;
    for (double& v : out.values) v = np_per_m_to_db_per_cm(v);
    return out;
}

// Binary payloads get a .f64 name; the header block moves to the sidecar.
std::string payload_name(const char* stem, bool binary) {
    return std::string(stem) + (binary ? ".f64" : ".txt");
}

std::pair<double, double> pgm_window(const AttenuationImage& image, const std::string& window_arg) {
    if (!window_arg.empty()) {
        const auto colon = window_arg.find(':');
        if (colon == std::string::npos)
            throw ValidationError("--pgm-window expects lo:hi in dB/cm");
        return {std::stod(window_arg.substr(0, colon)), std::stod(window_arg.substr(colon + 1))};
    }
    double lo = np_per_m_to_db_per_cm(*std::min_element(image.values.begin(), image.values.end()));
    double hi = np_per_m_to_db_per_cm(*std::max_element(image.values.begin(), image.values.end()));
    if (hi <= lo) hi = lo + 1.0;
    return {lo, hi};
}

struct PhantomOutputs {
    AttenuationImage truth;
    RegionMask mask;
};

PhantomOutputs write_phantom_outputs(const ExperimentConfig& config, const PhantomSpec& phantom,
                                     const fs::path& dir, bool binary) {
    const ImagingGrid grid = config.make_recon_grid();
    PhantomOutputs out{rasterize(phantom, grid), inclusion_mask(phantom, grid)};
    write_image(dir / payload_name("truth_image", binary), out.truth, binary);
    write_mask(dir / "inclusion_mask.txt", out.mask);
    return out;
}

int cmd_phantom(const ExperimentConfig& config, const std::string& spec_path, const fs::path& dir,
                bool pgm, const std::string& window_arg) {
    const PhantomSpec phantom = load_phantom_spec(spec_path);
    const PhantomOutputs out = write_phantom_outputs(config, phantom, dir, config.binary_payloads);
    if (pgm) {
        const auto [lo, hi] = pgm_window(out.truth, window_arg);
        write_pgm16(dir / "truth_image.pgm", out.truth, lo, hi);
    }
    return kOk;
}

SimulationResult run_simulation(const ExperimentConfig& config, const PhantomSpec& phantom) {
    const ImagingGrid sim_grid = make_grid(config.geometry, config.grid_axial * config.sim_oversample,
                                           config.grid_lateral * config.sim_oversample);
    const AttenuationImage alpha = rasterize(phantom, sim_grid);
    const RayPathMatrix paths = build_system_matrix(config.geometry, sim_grid);
    return simulate_measurement(alpha, paths, config.geometry, config.media(), config.noise);
}

int cmd_simulate(const ExperimentConfig& config, const std::string& spec_path, const fs::path& dir) {
    warn_if_tissue_defaulted(config);
    const PhantomSpec phantom = load_phantom_spec(spec_path);
    write_phantom_outputs(config, phantom, dir, config.binary_payloads);
    const SimulationResult sim = run_simulation(config, phantom);

    char level[40], seed[40], sigma[40], reference[40], oversample[40];
    std::snprintf(level, sizeof level, "%.17g", config.noise.level);
    std::snprintf(seed, sizeof seed, "%llu", static_cast<unsigned long long>(config.noise.seed));
    std::snprintf(sigma, sizeof sigma, "%.17g", sim.noise_sigma);
    std::snprintf(reference, sizeof reference, "%.17g", sim.reference_scale);
    std::snprintf(oversample, sizeof oversample, "%zu", config.sim_oversample);
    const std::map<std::string, std::string> noise_header = {
        {"noise_level", level},
        {"noise_seed", seed},
        {"noise_sigma_np", sigma},
        {"noise_reference_np", reference},
        {"sim_oversample", oversample},
    };
    write_amplitude_matrix(dir / payload_name("tissue_amplitudes", config.binary_payloads),
                           sim.tissue, config.binary_payloads, noise_header);
    write_amplitude_matrix(dir / payload_name("water_amplitudes", config.binary_payloads),
                           sim.water, config.binary_payloads);
    return kOk;
}

int cmd_calibrate(const ExperimentConfig& config, const std::string& meas_path,
                  const std::string& calib_path, const fs::path& dir) {
    warn_if_tissue_defaulted(config);
    const AmplitudeMatrix meas = read_amplitude_matrix(meas_path);
    const AmplitudeMatrix calib = read_amplitude_matrix(calib_path);
    const NormalizedData data = normalize(meas, calib, config.tissue, config.water, config.reflector,
                                          config.geometry, config.absolute);
    write_normalized_matrix(dir / payload_name("normalized_matrix", config.binary_payloads), data,
                            config.binary_payloads);
    return kOk;
}

int cmd_reconstruct(const ExperimentConfig& config, const std::string& meas_path,
                    const std::string& calib_path, const fs::path& dir,
                    const std::string& export_matrix_path, bool pgm, const std::string& window_arg) {
    warn_if_tissue_defaulted(config);
    const AmplitudeMatrix meas = read_amplitude_matrix(meas_path);
    const AmplitudeMatrix calib = read_amplitude_matrix(calib_path);
    const NormalizedData data = normalize(meas, calib, config.tissue, config.water, config.reflector,
                                          config.geometry, config.absolute);

    const ImagingGrid grid = config.make_recon_grid();
    const RayPathMatrix paths = build_system_matrix(config.geometry, grid);
    if (!export_matrix_path.empty()) export_matrix_triplets(export_matrix_path, paths);

    const SolveResult result = solve(paths, data, grid, config.recon);
    write_image(dir / payload_name("recon_image", config.binary_payloads), result.image,
                config.binary_payloads);
    write_convergence_report(dir / "convergence_report.txt", result.report);
    if (pgm) {
        const auto [lo, hi] = pgm_window(result.image, window_arg);
        write_pgm16(dir / "recon_image.pgm", result.image, lo, hi);
    }
    if (!result.report.converged) {
        std::cerr << "warning: solver stopped with status '" << result.report.status
                  << "' after " << result.report.iterations << " iterations\n";
        return kNotConverged;
    }
    return kOk;
}

MetricsReport metrics_in_db_cm(const AttenuationImage& recon, const AttenuationImage& truth,
                               const RegionMask& mask) {
    return evaluate_metrics(image_in_db_cm(recon), image_in_db_cm(truth), mask);
}

void append_metrics_csv(const fs::path& csv_path, double noise_level, std::uint64_t seed,
                        const MetricsReport& report) {
    const bool fresh = !fs::exists(csv_path);
    std::ofstream os(csv_path, std::ios::app | std::ios::binary);
    if (!os) throw IoError("cannot open '" + csv_path.string() + "' for appending");
    if (fresh) os << "noise_level,seed,crf,cnr,rmse_db_cm,psnr_db\n";
    char line[256];
    std::snprintf(line, sizeof line, "%.6g,%llu,%.9g,%.9g,%.9g,%.9g\n", noise_level,
                  static_cast<unsigned long long>(seed), report.crf, report.cnr, report.rmse,
                  report.psnr);
    os << line;
    if (!os) throw IoError("write failed: " + csv_path.string());
}

int cmd_evaluate(const ExperimentConfig& config, const std::string& recon_path,
                 const std::string& truth_path, const std::string& mask_path, const fs::path& dir,
                 const std::string& csv_path) {
    const AttenuationImage recon = read_image(recon_path);
    const AttenuationImage truth = read_image(truth_path);
    const RegionMask mask = read_mask(mask_path);
    const MetricsReport report = metrics_in_db_cm(recon, truth, mask);
    write_metrics_report(dir / "metrics.txt", report);
    if (!csv_path.empty())
        append_metrics_csv(csv_path, config.noise.level, config.noise.seed, report);
    return kOk;
}

int cmd_sweep(ExperimentConfig config, const std::string& spec_path,
              const std::string& levels_arg, const fs::path& dir) {
    warn_if_tissue_defaulted(config);
    std::vector<double> levels;
    {
        std::string token;
        std::istringstream ss(levels_arg);
        while (std::getline(ss, token, ','))
            if (!token.empty()) levels.push_back(std::stod(token));
    }
    if (levels.empty()) throw ValidationError("sweep: empty noise level list");

    const PhantomSpec phantom = load_phantom_spec(spec_path);
    const PhantomOutputs truth_out = write_phantom_outputs(config, phantom, dir, false);
    const ImagingGrid grid = config.make_recon_grid();
    const RayPathMatrix paths = build_system_matrix(config.geometry, grid);

    const fs::path csv_path = dir / "sweep_summary.csv";
    std::error_code ec;
    fs::remove(csv_path, ec);

    bool all_converged = true;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        config.noise.level = levels[i];
        char sub[32];
        std::snprintf(sub, sizeof sub, "level_%02zu", i);
        const fs::path level_dir = dir / sub;
        fs::create_directories(level_dir);

        const SimulationResult sim = run_simulation(config, phantom);
        const NormalizedData data = normalize(sim.tissue, sim.water, config.tissue, config.water,
                                              config.reflector, config.geometry, config.absolute);
        const SolveResult result = solve(paths, data, grid, config.recon);
        all_converged = all_converged && result.report.converged;

        write_image(level_dir / "recon_image.txt", result.image, false);
        write_convergence_report(level_dir / "convergence_report.txt", result.report);
        const MetricsReport report = metrics_in_db_cm(result.image, truth_out.truth, truth_out.mask);
        write_metrics_report(level_dir / "metrics.txt", report);
        append_metrics_csv(csv_path, levels[i], config.noise.seed, report);
    }
    return all_converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ultrasound attenuation tomography with a passive acoustic reflector"};
    app.require_subcommand(1);

    CommonArgs phantom_args, simulate_args, calibrate_args, reconstruct_args, evaluate_args, sweep_args;
    std::string spec_path, meas_path, calib_path, recon_path, truth_path, mask_path;
    std::string export_matrix_path, csv_path, window_arg;
    std::string levels_arg = "0,0.025,0.05,0.075,0.1,0.13";
    bool pgm = false;

    auto* phantom_cmd = app.add_subcommand("phantom", "Rasterize a phantom into truth image and mask");
    add_common_options(phantom_cmd, phantom_args);
    phantom_cmd->add_option("--spec", spec_path, "Phantom description file")->required();
    phantom_cmd->add_flag("--pgm", pgm, "Also write a 16-bit graymap preview");
    phantom_cmd->add_option("--pgm-window", window_arg, "Gray window lo:hi in dB/cm");

    auto* simulate_cmd = app.add_subcommand("simulate", "Forward-simulate tissue and water amplitude matrices");
    add_common_options(simulate_cmd, simulate_args);
    simulate_cmd->add_option("--spec", spec_path, "Phantom description file")->required();

    auto* calibrate_cmd = app.add_subcommand("calibrate", "Normalize a measurement against a water calibration");
    add_common_options(calibrate_cmd, calibrate_args);
    calibrate_cmd->add_option("--meas", meas_path, "Measured amplitude matrix")->required();
    calibrate_cmd->add_option("--calib", calib_path, "Water calibration amplitude matrix")->required();

    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Calibrate and solve for the attenuation image");
    add_common_options(reconstruct_cmd, reconstruct_args);
    reconstruct_cmd->add_option("--meas", meas_path, "Measured amplitude matrix")->required();
    reconstruct_cmd->add_option("--calib", calib_path, "Water calibration amplitude matrix")->required();
    reconstruct_cmd->add_option("--export-matrix", export_matrix_path,
                                "Write the ray path matrix as row,col,value triplets");
    reconstruct_cmd->add_flag("--pgm", pgm, "Also write a 16-bit graymap of the reconstruction");
    reconstruct_cmd->add_option("--pgm-window", window_arg, "Gray window lo:hi in dB/cm");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Metrics for a reconstruction against ground truth");
    add_common_options(evaluate_cmd, evaluate_args);
    evaluate_cmd->add_option("--recon", recon_path, "Reconstructed image")->required();
    evaluate_cmd->add_option("--truth", truth_path, "Ground-truth image")->required();
    evaluate_cmd->add_option("--mask", mask_path, "Inclusion mask")->required();
    evaluate_cmd->add_option("--csv", csv_path, "Append a delimited metrics row to this file");

    auto* sweep_cmd = app.add_subcommand("sweep", "Simulate/reconstruct/evaluate across noise levels");
    add_common_options(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--spec", spec_path, "Phantom description file")->required();
    sweep_cmd->add_option("--levels", levels_arg, "Comma-separated noise fractions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*phantom_cmd) {
            const auto config = build_config(phantom_args);
            return cmd_phantom(config, spec_path, prepare_output_dir(phantom_args), pgm, window_arg);
        }
        if (*simulate_cmd) {
            const auto config = build_config(simulate_args);
            return cmd_simulate(config, spec_path, prepare_output_dir(simulate_args));
        }
        if (*calibrate_cmd) {
            const auto config = build_config(calibrate_args);
            return cmd_calibrate(config, meas_path, calib_path, prepare_output_dir(calibrate_args));
        }
        if (*reconstruct_cmd) {
            const auto config = build_config(reconstruct_args);
            return cmd_reconstruct(config, meas_path, calib_path, prepare_output_dir(reconstruct_args),
                                   export_matrix_path, pgm, window_arg);
        }
        if (*evaluate_cmd) {
            const auto config = build_config(evaluate_args);
            return cmd_evaluate(config, recon_path, truth_path, mask_path,
                                prepare_output_dir(evaluate_args), csv_path);
        }
        if (*sweep_cmd) {
            const auto config = build_config(sweep_args);
            return cmd_sweep(config, spec_path, levels_arg, prepare_output_dir(sweep_args));
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
    return kUsage;
}
