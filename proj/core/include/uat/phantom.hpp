#pragma once

#include <vector>

#include "uat/image.hpp"

namespace uat {

/// One inclusion: an ellipse (extents are semi-axes) or an axis-aligned
/// rectangle (extents are full side lengths), both centered at (center_x,
/// center_y). Attenuation in Np/m.
struct PhantomShape {
    enum class Kind { ellipse, rectangle };

    Kind kind = Kind::ellipse;
    double center_x = 0.0;  // m
    double center_y = 0.0;  // m
    double extent_x = 0.0;  // m
    double extent_y = 0.0;  // m
    double attenuation = 0.0;  // Np/m

    bool covers(double x, double y) const;
    // Axis-aligned bounding box, used for the in-domain check.
    double min_x() const;
    double max_x() const;
    double min_y() const;
    double max_y() const;
};

/// Declarative ground-truth layout: uniform background plus inclusions.
/// Later shapes win where shapes overlap.
struct PhantomSpec {
    double background_attenuation = 0.0;  // Np/m
    std::vector<PhantomShape> inclusions;

    /// Attenuations nonnegative and every shape inside the grid domain.
    void validate(const ImagingGrid& grid) const;
};

/// Cell value is the attenuation of the last shape covering the cell center,
/// else the background. Center sampling keeps region masks exact.
AttenuationImage rasterize(const PhantomSpec& phantom, const ImagingGrid& grid);

/// Cells whose center lies inside any inclusion.
RegionMask inclusion_mask(const PhantomSpec& phantom, const ImagingGrid& grid);

}  // namespace uat
