#include "uat/image.hpp"

#include <cmath>

#include "uat/errors.hpp"

namespace uat {

void AttenuationImage::validate() const {
    grid.validate();
    if (values.size() != grid.cell_count())
        throw ValidationError("image: value count does not match the grid");
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError("image: non-finite value");
}

std::size_t RegionMask::count_inside() const {
    std::size_t n = 0;
    for (auto v : inside) n += (v != 0);
    return n;
}

void RegionMask::validate() const {
    grid.validate();
    if (inside.size() != grid.cell_count())
        throw ValidationError("mask: cell count does not match the grid");
}

}  // namespace uat
