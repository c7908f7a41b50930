#include "uat/geometry.hpp"

#include <cmath>
#include <string>

#include "uat/errors.hpp"

namespace uat {

void AcquisitionGeometry::validate() const {
    if (n_elements < 1)
        throw ValidationError("geometry: n_elements must be >= 1");
    if (!(pitch > 0.0) || !std::isfinite(pitch))
        throw ValidationError("geometry: pitch must be positive and finite");
    if (!(reflector_depth > 0.0) || !std::isfinite(reflector_depth))
        throw ValidationError("geometry: reflector_depth must be positive and finite");
}

void ImagingGrid::validate() const {
    if (n_axial < 1 || n_lateral < 1)
        throw ValidationError("grid: at least one cell per dimension required");
    if (!(cell_height > 0.0) || !std::isfinite(cell_height))
        throw ValidationError("grid: cell_height must be positive and finite");
    if (cell_width < 0.0 || !std::isfinite(cell_width))
        throw ValidationError("grid: cell_width must be nonnegative and finite");
}

ImagingGrid make_grid(const AcquisitionGeometry& geom, std::size_t n_axial, std::size_t n_lateral) {
    geom.validate();
    if (n_axial < 1 || n_lateral < 1)
        throw ValidationError("grid: at least one cell per dimension required");
    ImagingGrid grid;
    grid.n_axial = n_axial;
    grid.n_lateral = n_lateral;
    grid.cell_width = geom.aperture() / static_cast<double>(n_lateral);
    grid.cell_height = geom.reflector_depth / static_cast<double>(n_axial);
    return grid;
}

bool grid_matches_geometry(const ImagingGrid& grid, const AcquisitionGeometry& geom) {
    const double slack_x = 1e-9 * std::max(geom.aperture(), 1e-3);
    const double slack_y = 1e-9 * std::max(geom.reflector_depth, 1e-3);
    return std::abs(grid.width() - geom.aperture()) <= slack_x &&
           std::abs(grid.height() - geom.reflector_depth) <= slack_y;
}

RaySpec ray_for_pair(const AcquisitionGeometry& geom, std::size_t t, std::size_t r) {
    geom.validate();
    if (t >= geom.n_elements || r >= geom.n_elements)
        throw ValidationError("ray_for_pair: element index out of range (t=" + std::to_string(t) +
                              ", r=" + std::to_string(r) + ", n=" + std::to_string(geom.n_elements) + ")");
    RaySpec ray;
    ray.tx_index = t;
    ray.rx_index = r;
    ray.tx_x = geom.element_x(t);
    ray.rx_x = geom.element_x(r);
    ray.vertex_x = 0.5 * (ray.tx_x + ray.rx_x);
    const double lateral = std::abs(ray.tx_x - ray.rx_x);
    ray.incidence_angle = std::atan(lateral / (2.0 * geom.reflector_depth));
    ray.total_length = 2.0 * geom.reflector_depth / std::cos(ray.incidence_angle);
    return ray;
}

std::vector<RaySpec> all_rays(const AcquisitionGeometry& geom) {
    geom.validate();
    std::vector<RaySpec> rays;
    rays.reserve(geom.pair_count());
    for (std::size_t t = 0; t < geom.n_elements; ++t)
        for (std::size_t r = 0; r < geom.n_elements; ++r)
            rays.push_back(ray_for_pair(geom, t, r));
    return rays;
}

}  // namespace uat
