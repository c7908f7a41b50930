#include "uat/phantom.hpp"

#include <cmath>

#include "uat/errors.hpp"

namespace uat {

bool PhantomShape::covers(double x, double y) const {
    const double dx = x - center_x;
    const double dy = y - center_y;
    if (kind == Kind::rectangle)
        return std::abs(dx) <= 0.5 * extent_x && std::abs(dy) <= 0.5 * extent_y;
    if (extent_x <= 0.0 || extent_y <= 0.0) return false;
    const double nx = dx / extent_x;
    const double ny = dy / extent_y;
    return nx * nx + ny * ny <= 1.0;
}

double PhantomShape::min_x() const { return center_x - (kind == Kind::ellipse ? extent_x : 0.5 * extent_x); }
double PhantomShape::max_x() const { return center_x + (kind == Kind::ellipse ? extent_x : 0.5 * extent_x); }
double PhantomShape::min_y() const { return center_y - (kind == Kind::ellipse ? extent_y : 0.5 * extent_y); }
double PhantomShape::max_y() const { return center_y + (kind == Kind::ellipse ? extent_y : 0.5 * extent_y); }

void PhantomSpec::validate(const ImagingGrid& grid) const {
    grid.validate();
    if (background_attenuation < 0.0 || !std::isfinite(background_attenuation))
        throw ValidationError("phantom: background attenuation must be nonnegative and finite");
    const double slack_x = 1e-12 + 1e-9 * grid.width();
    const double slack_y = 1e-12 + 1e-9 * grid.height();
    for (const auto& shape : inclusions) {
        if (shape.attenuation < 0.0 || !std::isfinite(shape.attenuation))
            throw ValidationError("phantom: inclusion attenuation must be nonnegative and finite");
        if (!(shape.extent_x > 0.0) || !(shape.extent_y > 0.0))
            throw ValidationError("phantom: inclusion extents must be positive");
        if (shape.min_x() < -slack_x || shape.max_x() > grid.width() + slack_x ||
            shape.min_y() < -slack_y || shape.max_y() > grid.height() + slack_y)
            throw ValidationError("phantom: inclusion extends outside the imaging domain");
    }
}

AttenuationImage rasterize(const PhantomSpec& phantom, const ImagingGrid& grid) {
    phantom.validate(grid);
    AttenuationImage image(grid, phantom.background_attenuation);
    for (std::size_t row = 0; row < grid.n_axial; ++row) {
        const double y = grid.cell_center_y(row);
        for (std::size_t col = 0; col < grid.n_lateral; ++col) {
            const double x = grid.cell_center_x(col);
            for (auto it = phantom.inclusions.rbegin(); it != phantom.inclusions.rend(); ++it) {
                if (it->covers(x, y)) {
                    image.at(row, col) = it->attenuation;
                    break;
                }
            }
        }
    }
    return image;
}

RegionMask inclusion_mask(const PhantomSpec& phantom, const ImagingGrid& grid) {
    phantom.validate(grid);
    RegionMask mask(grid);
    for (std::size_t row = 0; row < grid.n_axial; ++row) {
        const double y = grid.cell_center_y(row);
        for (std::size_t col = 0; col < grid.n_lateral; ++col) {
            const double x = grid.cell_center_x(col);
            for (const auto& shape : phantom.inclusions) {
                if (shape.covers(x, y)) {
                    mask.inside[grid.cell_index(row, col)] = 1;
                    break;
                }
            }
        }
    }
    return mask;
}

}  // namespace uat
