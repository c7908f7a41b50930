#pragma once

#include <cstdint>
#include <vector>

#include "uat/geometry.hpp"

namespace uat {

/// Attenuation map on an imaging grid, row-major [axial][lateral], Np/m.
/// File I/O converts to dB/cm at the boundary.
struct AttenuationImage {
    ImagingGrid grid;
    std::vector<double> values;

    AttenuationImage() = default;
    AttenuationImage(const ImagingGrid& g, double fill = 0.0)
        : grid(g), values(g.cell_count(), fill) {}

    double& at(std::size_t row, std::size_t col) { return values[grid.cell_index(row, col)]; }
    double at(std::size_t row, std::size_t col) const { return values[grid.cell_index(row, col)]; }

    /// Dimensions consistent and every value finite, else ValidationError.
    void validate() const;
};

/// Boolean image marking inclusion cells; background is the complement.
struct RegionMask {
    ImagingGrid grid;
    std::vector<std::uint8_t> inside;

    RegionMask() = default;
    explicit RegionMask(const ImagingGrid& g) : grid(g), inside(g.cell_count(), 0) {}

    bool at(std::size_t row, std::size_t col) const { return inside[grid.cell_index(row, col)] != 0; }
    std::size_t count_inside() const;

    void validate() const;
};

}  // namespace uat
