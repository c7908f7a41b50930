#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "uat/geometry.hpp"
#include "uat/phantom.hpp"
#include "uat/physics.hpp"
#include "uat/simulator.hpp"
#include "uat/sparse_matrix.hpp"

namespace uat::test {

inline AcquisitionGeometry reference_geometry(std::size_t n = 128, double depth = 30e-3) {
    return AcquisitionGeometry{n, 300e-6, depth};
}

inline MediaSet default_media() {
    return MediaSet{water_at_20c(), tissue_default(), plexiglas()};
}

inline PhantomSpec single_inclusion_phantom(const AcquisitionGeometry& geom,
                                            double background_db_cm = 0.5,
                                            double inclusion_db_cm = 1.5, double radius = 5e-3) {
    PhantomSpec phantom;
    phantom.background_attenuation = db_per_cm_to_np_per_m(background_db_cm);
    phantom.inclusions.push_back({PhantomShape::Kind::ellipse, geom.aperture() / 2,
                                  geom.reflector_depth / 2, radius, radius,
                                  db_per_cm_to_np_per_m(inclusion_db_cm)});
    return phantom;
}

// Independent path-length oracle: clips each ray leg against every cell
// rectangle (Liang-Barsky), assigning gridline-riding segments by the
// half-open convention through the clipped midpoint. O(cells) per ray, no
// shared code with the incremental traversal.
inline double clip_segment_length(double x0, double y0, double x1, double y1, double xmin,
                                  double xmax, double ymin, double ymax, double* mid_x,
                                  double* mid_y) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {x0 - xmin, xmax - x0, y0 - ymin, ymax - y0};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return 0.0;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return 0.0;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return 0.0;
            t1 = std::min(t1, r);
        }
    }
    if (t1 <= t0) return 0.0;
    const double tm = 0.5 * (t0 + t1);
    *mid_x = x0 + tm * dx;
    *mid_y = y0 + tm * dy;
    return (t1 - t0) * std::hypot(dx, dy);
}

inline std::vector<double> brute_force_ray_cells(const RaySpec& ray, const ImagingGrid& grid) {
    std::vector<double> lengths(grid.cell_count(), 0.0);
    const double depth = grid.height();
    const double legs[2][4] = {
        {ray.tx_x, 0.0, ray.vertex_x, depth},
        {ray.vertex_x, depth, ray.rx_x, 0.0},
    };
    // Boxes are inflated by a relative hair so boundary-riding segments are
    // not lost to rounding of c*w + w; the midpoint rule below keeps the
    // assignment unique.
    const double tol_x = 1e-12 * grid.cell_width;
    const double tol_y = 1e-12 * grid.cell_height;
    for (const auto& leg : legs) {
        for (std::size_t r = 0; r < grid.n_axial; ++r) {
            for (std::size_t c = 0; c < grid.n_lateral; ++c) {
                const double xmin = static_cast<double>(c) * grid.cell_width - tol_x;
                const double xmax = xmin + grid.cell_width + 2 * tol_x;
                const double ymin = static_cast<double>(r) * grid.cell_height - tol_y;
                const double ymax = ymin + grid.cell_height + 2 * tol_y;
                double mx = 0.0, my = 0.0;
                const double len =
                    clip_segment_length(leg[0], leg[1], leg[2], leg[3], xmin, xmax, ymin, ymax, &mx, &my);
                if (len <= 0.0) continue;
                // Half-open ownership of the clipped midpoint; boundary-riding
                // segments otherwise count in two adjacent cells.
                std::size_t col = grid.cell_width > 0
                                      ? static_cast<std::size_t>(std::min<double>(
                                            std::floor(mx / grid.cell_width),
                                            static_cast<double>(grid.n_lateral - 1)))
                                      : 0;
                std::size_t row = static_cast<std::size_t>(std::min<double>(
                    std::floor(my / grid.cell_height), static_cast<double>(grid.n_axial - 1)));
                if (col != c || row != r) continue;
                lengths[grid.cell_index(r, c)] += len;
            }
        }
    }
    return lengths;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace uat::test
