#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "uat/calibration.hpp"
#include "uat/image.hpp"
#include "uat/metrics.hpp"
#include "uat/phantom.hpp"
#include "uat/recon.hpp"
#include "uat/sparse_matrix.hpp"

namespace uat {

// All files are delimited text with a #-prefixed "key = value" header block.
// Images are stored in dB/cm, amplitude matrices as linear amplitudes, the
// normalized matrix in Np. With binary=true the payload goes to <path> as
// flat little-endian float64 and the header block to <path>.hdr; readers
// detect the sidecar automatically. Doubles are written as %.17g, which
// round-trips, so identical data produces identical bytes.

void write_amplitude_matrix(const std::filesystem::path& path, const AmplitudeMatrix& matrix,
                            bool binary = false,
                            const std::map<std::string, std::string>& extra_header = {});
AmplitudeMatrix read_amplitude_matrix(const std::filesystem::path& path);

void write_image(const std::filesystem::path& path, const AttenuationImage& image,
                 bool binary = false);
AttenuationImage read_image(const std::filesystem::path& path);

void write_mask(const std::filesystem::path& path, const RegionMask& mask);
RegionMask read_mask(const std::filesystem::path& path);

/// n x n log-ratio matrix (Np) in transmit-major layout.
void write_normalized_matrix(const std::filesystem::path& path, const NormalizedData& data,
                             bool binary = false);

/// 16-bit portable graymap, values mapped linearly from the stated dB/cm window.
void write_pgm16(const std::filesystem::path& path, const AttenuationImage& image,
                 double window_lo_db_cm, double window_hi_db_cm);

void write_metrics_report(const std::filesystem::path& path, const MetricsReport& report);
MetricsReport read_metrics_report(const std::filesystem::path& path);

void write_convergence_report(const std::filesystem::path& path, const SolveReport& report);

/// "row,col,value" triplets, %.12e values.
void export_matrix_triplets(const std::filesystem::path& path, const SparseMatrix& matrix);

/// Phantom description file: background plus one "inclusion = ..." line per
/// shape, attenuations in dB/cm. See configs/ for samples.
PhantomSpec load_phantom_spec(const std::filesystem::path& path);
void write_phantom_spec(const std::filesystem::path& path, const PhantomSpec& phantom);

}  // namespace uat
