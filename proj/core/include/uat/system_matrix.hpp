#pragma once

#include <utility>
#include <vector>

#include "uat/geometry.hpp"
#include "uat/sparse_matrix.hpp"

namespace uat {

/// Sparse M x (N1*N2) matrix of per-cell path lengths (m), one row per Tx/Rx
/// ray in (t, r) row-major order.
using RayPathMatrix = SparseMatrix;

/// Per-cell intersection lengths of one V-shaped ray with the grid, merged
/// over both legs and sorted by flat cell index. Lengths sum to the ray's
/// total length by construction (the traversal telescopes the parameter
/// interval, so nothing is lost at cell boundaries).
std::vector<SparseMatrix::Entry> trace_ray_cells(const RaySpec& ray, const ImagingGrid& grid);

/// Exact incremental grid-crossing traversal for every ray of the geometry.
/// The grid must span the geometry domain. Deterministic: identical inputs
/// produce identical storage.
RayPathMatrix build_system_matrix(const AcquisitionGeometry& geom, const ImagingGrid& grid);

}  // namespace uat
