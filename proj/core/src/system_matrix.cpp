#include "uat/system_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uat/errors.hpp"

namespace uat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t clamp_index(std::int64_t v, std::int64_t hi) {
    return v < 0 ? 0 : (v > hi ? hi : v);
}

// Walks one straight segment from (x0, y0) to (x1, y1) through the grid and
// appends (flat cell index, length) pairs in traversal order.
//
// The segment parameter t runs over [0, 1]; cell-exit parameters advance by
// constant increments per axis, and each emitted length is (t_exit - t) times
// the segment length, so the emitted lengths telescope to the full segment
// length regardless of rounding in the crossing positions. Cells are
// half-open [low, high), which also settles corner-grazing ties. A crossing
// that would step outside the grid keeps the walk in the edge cell instead
// (endpoints sit on the domain boundary, so only rounding slivers reach it).
void walk_segment(double x0, double y0, double x1, double y1, const ImagingGrid& grid,
                  std::vector<SparseMatrix::Entry>& out) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    const double seg_len = std::hypot(dx, dy);
    if (seg_len == 0.0) return;

    const auto n_lat = static_cast<std::int64_t>(grid.n_lateral);
    const auto n_ax = static_cast<std::int64_t>(grid.n_axial);

    std::int64_t ix = grid.cell_width > 0.0
                          ? clamp_index(static_cast<std::int64_t>(std::floor(x0 / grid.cell_width)), n_lat - 1)
                          : 0;
    std::int64_t iy = clamp_index(static_cast<std::int64_t>(std::floor(y0 / grid.cell_height)), n_ax - 1);

    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

    double t_next_x = kInf, dt_x = kInf;
    if (step_x > 0) {
        t_next_x = (static_cast<double>(ix + 1) * grid.cell_width - x0) / dx;
        dt_x = grid.cell_width / dx;
    } else if (step_x < 0) {
        t_next_x = (static_cast<double>(ix) * grid.cell_width - x0) / dx;
        dt_x = -grid.cell_width / dx;
    }
    double t_next_y = kInf, dt_y = kInf;
    if (step_y > 0) {
        t_next_y = (static_cast<double>(iy + 1) * grid.cell_height - y0) / dy;
        dt_y = grid.cell_height / dy;
    } else if (step_y < 0) {
        t_next_y = (static_cast<double>(iy) * grid.cell_height - y0) / dy;
        dt_y = -grid.cell_height / dy;
    }

    double t = 0.0;
    while (t < 1.0) {
        double t_exit = std::min(1.0, std::min(t_next_x, t_next_y));
        if (t_exit < t) t_exit = t;  // degenerate boundary start
        const double len = (t_exit - t) * seg_len;
        if (len > 0.0)
            out.emplace_back(static_cast<std::int32_t>(iy * n_lat + ix), len);
        if (t_exit >= 1.0) break;
        if (t_next_x <= t_next_y) {
            t = t_next_x;
            if (ix + step_x < 0 || ix + step_x >= n_lat) {
                t_next_x = kInf;
            } else {
                ix += step_x;
                t_next_x += dt_x;
            }
        } else {
            t = t_next_y;
            if (iy + step_y < 0 || iy + step_y >= n_ax) {
                t_next_y = kInf;
            } else {
                iy += step_y;
                t_next_y += dt_y;
            }
        }
    }
}

}  // namespace

std::vector<SparseMatrix::Entry> trace_ray_cells(const RaySpec& ray, const ImagingGrid& grid) {
    std::vector<SparseMatrix::Entry> raw;
    const double depth = grid.height();
    walk_segment(ray.tx_x, 0.0, ray.vertex_x, depth, grid, raw);
    walk_segment(ray.vertex_x, depth, ray.rx_x, 0.0, grid, raw);

    // Down-leg entries precede up-leg entries; a stable sort keeps that order
    // among duplicates so the per-cell sums are reproducible bit for bit.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const SparseMatrix::Entry& a, const SparseMatrix::Entry& b) { return a.first < b.first; });

    std::vector<SparseMatrix::Entry> merged;
    merged.reserve(raw.size());
    for (const auto& entry : raw) {
        if (!merged.empty() && merged.back().first == entry.first)
            merged.back().second += entry.second;
        else
            merged.push_back(entry);
    }
    return merged;
}

RayPathMatrix build_system_matrix(const AcquisitionGeometry& geom, const ImagingGrid& grid) {
    geom.validate();
    grid.validate();
    if (!grid_matches_geometry(grid, geom))
        throw ValidationError("build_system_matrix: grid span does not match the acquisition domain");

    SparseMatrix::Builder builder(geom.pair_count(), grid.cell_count());
    for (std::size_t t = 0; t < geom.n_elements; ++t) {
        for (std::size_t r = 0; r < geom.n_elements; ++r) {
            const RaySpec ray = ray_for_pair(geom, t, r);
            const auto cells = trace_ray_cells(ray, grid);
            builder.append_row(cells);
        }
    }
    return builder.finish();
}

}  // namespace uat
