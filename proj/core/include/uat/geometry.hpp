#pragma once

#include <cstddef>
#include <vector>

namespace uat {

/// Linear transducer array facing a flat reflector plate.
///
/// Element i sits at x_i = i * pitch on the transducer face (depth 0); the
/// plate surface is the line y = reflector_depth. All lengths are meters.
struct AcquisitionGeometry {
    std::size_t n_elements = 0;
    double pitch = 0.0;            // element spacing (m)
    double reflector_depth = 0.0;  // transducer-to-plate distance d (m)

    double element_x(std::size_t i) const { return static_cast<double>(i) * pitch; }
    double aperture() const { return static_cast<double>(n_elements - 1) * pitch; }
    std::size_t pair_count() const { return n_elements * n_elements; }

    /// Throws ValidationError unless n_elements >= 1, pitch > 0, depth > 0.
    void validate() const;
};

/// Specular V-shaped path for one Tx/Rx pair:
/// (tx_x, 0) -> (vertex_x, d) -> (rx_x, 0).
struct RaySpec {
    std::size_t tx_index = 0;
    std::size_t rx_index = 0;
    double tx_x = 0.0;             // m
    double rx_x = 0.0;             // m
    double vertex_x = 0.0;         // reflection point on the plate (m)
    double incidence_angle = 0.0;  // rad, measured from the plate normal
    double total_length = 0.0;     // both legs (m)
};

/// Reconstruction grid spanning exactly [0, aperture] x [0, reflector_depth].
///
/// Cell (row, col) covers the half-open box
///   [col*cell_width, (col+1)*cell_width) x [row*cell_height, (row+1)*cell_height),
/// row 0 touching the transducer face. Images are stored row-major, so cell
/// (row, col) maps to flat index row * n_lateral + col.
struct ImagingGrid {
    std::size_t n_axial = 0;    // N1 rows (depth direction)
    std::size_t n_lateral = 0;  // N2 columns
    double cell_width = 0.0;    // m (zero only for the degenerate single-element aperture)
    double cell_height = 0.0;   // m

    std::size_t cell_count() const { return n_axial * n_lateral; }
    double width() const { return cell_width * static_cast<double>(n_lateral); }
    double height() const { return cell_height * static_cast<double>(n_axial); }
    std::size_t cell_index(std::size_t row, std::size_t col) const { return row * n_lateral + col; }
    double cell_center_x(std::size_t col) const { return (static_cast<double>(col) + 0.5) * cell_width; }
    double cell_center_y(std::size_t row) const { return (static_cast<double>(row) + 0.5) * cell_height; }

    void validate() const;
};

/// Grid with n_axial x n_lateral cells covering the geometry's domain.
ImagingGrid make_grid(const AcquisitionGeometry& geom, std::size_t n_axial, std::size_t n_lateral);

/// True when the grid span matches the geometry domain to floating slack.
bool grid_matches_geometry(const ImagingGrid& grid, const AcquisitionGeometry& geom);

/// Ray for the (t, r) pair. Symmetric in (t, r). Throws on out-of-range index.
RaySpec ray_for_pair(const AcquisitionGeometry& geom, std::size_t t, std::size_t r);

/// All n^2 rays, row-major by (t, r).
std::vector<RaySpec> all_rays(const AcquisitionGeometry& geom);

}  // namespace uat
