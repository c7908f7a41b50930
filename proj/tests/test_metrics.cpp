#include <doctest.h>

#include <cmath>
#include <limits>

#include "test_utils.hpp"
#include "uat/errors.hpp"
#include "uat/metrics.hpp"
#include "uat/phantom.hpp"

using namespace uat;

namespace {

ImagingGrid small_grid() {
    return make_grid(AcquisitionGeometry{5, 1e-3, 4e-3}, 4, 4);
}

// Left half inclusion, right half background.
RegionMask half_mask(const ImagingGrid& grid) {
    RegionMask mask(grid);
    for (std::size_t r = 0; r < grid.n_axial; ++r)
        for (std::size_t c = 0; c < grid.n_lateral / 2; ++c)
            mask.inside[grid.cell_index(r, c)] = 1;
    return mask;
}

AttenuationImage two_level(const ImagingGrid& grid, const RegionMask& mask, double inc, double bkg) {
    AttenuationImage image(grid);
    for (std::size_t i = 0; i < image.values.size(); ++i)
        image.values[i] = mask.inside[i] ? inc : bkg;
    return image;
}

}  // namespace

TEST_CASE("contrast-ratio fraction") {
    const auto grid = small_grid();
    const auto mask = half_mask(grid);
    const auto truth = two_level(grid, mask, 3.0, 1.0);  // C* = 2*2/4 = 1

    SUBCASE("perfect reconstruction") {
        CHECK(crf(truth, truth, mask) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("worked example") {
        const auto recon = two_level(grid, mask, 2.5, 1.0);  // C = 3/3.5
        CHECK(crf(recon, truth, mask) == doctest::Approx(0.857142857142857).epsilon(1e-12));
    }
    SUBCASE("flat reconstruction has zero contrast") {
        const AttenuationImage flat(grid, 2.0);
        CHECK(crf(flat, truth, mask) == 0.0);
    }
    SUBCASE("zero true contrast is an error") {
        const AttenuationImage flat(grid, 2.0);
        CHECK_THROWS_AS(crf(truth, flat, mask), ValidationError);
    }
}

TEST_CASE("contrast-to-noise ratio") {
    const auto grid = small_grid();
    const auto mask = half_mask(grid);

    SUBCASE("worked example: means 3 and 1, stds 0.5") {
        AttenuationImage image(grid);
        for (std::size_t r = 0; r < grid.n_axial; ++r)
            for (std::size_t c = 0; c < grid.n_lateral; ++c) {
                const bool inc = mask.at(r, c);
                const double base = inc ? 3.0 : 1.0;
                image.at(r, c) = base + ((r + c) % 2 == 0 ? 0.5 : -0.5);
            }
        CHECK(cnr(image, mask) == doctest::Approx(2.0 / std::sqrt(0.5)).epsilon(1e-12));
    }
    SUBCASE("identical constant regions: 0/0 defined as zero with a flag") {
        const AttenuationImage flat(grid, 1.0);
        bool degenerate = false;
        CHECK(cnr(flat, mask, &degenerate) == 0.0);
        CHECK(degenerate);
    }
    SUBCASE("distinct constant regions: infinite contrast-to-noise") {
        const auto image = two_level(grid, mask, 2.0, 1.0);
        CHECK(std::isinf(cnr(image, mask)));
    }
    SUBCASE("population variance, not sample variance") {
        // Two-cell regions with values {0, 1}: population std = 0.5.
        const ImagingGrid tiny = make_grid(AcquisitionGeometry{3, 1e-3, 1e-3}, 1, 4);
        RegionMask mask2(tiny);
        mask2.inside = {1, 1, 0, 0};
        AttenuationImage image(tiny);
        image.values = {0.0, 1.0, 5.0, 5.0};
        // |0.5 - 5| / sqrt(0.25 + 0) = 9.
        CHECK(cnr(image, mask2) == doctest::Approx(9.0).epsilon(1e-12));
    }
}

TEST_CASE("rmse and psnr") {
    const auto grid = small_grid();
    const auto mask = half_mask(grid);
    const auto truth = two_level(grid, mask, 3.0, 1.0);

    SUBCASE("identity") {
        CHECK(rmse(truth, truth) == 0.0);
        CHECK(std::isinf(psnr(truth, truth)));
    }
    SUBCASE("constant error") {
        AttenuationImage off = truth;
        for (double& v : off.values) v += 0.1;
        CHECK(rmse(off, truth) == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("peak over rmse in dB") {
        AttenuationImage recon(grid, 0.0);
        recon.values[0] = 1.0;
        AttenuationImage truth2 = recon;
        for (double& v : truth2.values) v += 0.1;
        // rmse = 0.1, max(recon) = 1 -> 20 dB.
        CHECK(psnr(recon, truth2) == doctest::Approx(20.0).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch") {
        const AttenuationImage other(make_grid(AcquisitionGeometry{5, 1e-3, 4e-3}, 2, 2), 0.0);
        CHECK_THROWS_AS(rmse(other, truth), ValidationError);
    }
}

TEST_CASE("metric invariances") {
    const auto grid = small_grid();
    const auto mask = half_mask(grid);
    AttenuationImage truth = two_level(grid, mask, 3.0, 1.0);
    AttenuationImage recon = truth;
    for (std::size_t i = 0; i < recon.values.size(); ++i)
        recon.values[i] += (i % 3 == 0 ? 0.2 : -0.1);

    const double s = 2.5;
    AttenuationImage recon_s = recon, truth_s = truth;
    for (double& v : recon_s.values) v *= s;
    for (double& v : truth_s.values) v *= s;

    SUBCASE("CRF and CNR invariant under common positive scaling") {
        CHECK(crf(recon_s, truth_s, mask) == doctest::Approx(crf(recon, truth, mask)).epsilon(1e-12));
        CHECK(cnr(recon_s, mask) == doctest::Approx(cnr(recon, mask)).epsilon(1e-12));
    }
    SUBCASE("RMSE scales linearly") {
        CHECK(rmse(recon_s, truth_s) == doctest::Approx(s * rmse(recon, truth)).epsilon(1e-12));
    }
    SUBCASE("PSNR invariant under common positive scaling") {
        CHECK(psnr(recon_s, truth_s) == doctest::Approx(psnr(recon, truth)).epsilon(1e-12));
    }
}

TEST_CASE("combined report") {
    const auto grid = small_grid();
    const auto mask = half_mask(grid);
    const auto truth = two_level(grid, mask, 3.0, 1.0);
    const auto recon = two_level(grid, mask, 2.5, 1.0);
    const MetricsReport report = evaluate_metrics(recon, truth, mask);
    CHECK(report.crf == doctest::Approx(0.857142857).epsilon(1e-9));
    CHECK(std::isinf(report.cnr));
    CHECK(report.rmse == doctest::Approx(std::sqrt(0.25 * 0.5)).epsilon(1e-12));
    CHECK_FALSE(report.psnr_infinite);
    CHECK(report.stats.mean_inclusion == doctest::Approx(2.5));
    CHECK(report.stats.mean_background == doctest::Approx(1.0));
}

TEST_CASE("threshold mask and connected components") {
    const auto geom = test::reference_geometry(32, 20e-3);
    const ImagingGrid grid = make_grid(geom, 32, 32);

    PhantomSpec phantom;
    phantom.background_attenuation = 1.0;
    phantom.inclusions.push_back({PhantomShape::Kind::ellipse, 2e-3, 4e-3, 1e-3, 1e-3, 5.0});
    phantom.inclusions.push_back({PhantomShape::Kind::ellipse, 7e-3, 4e-3, 1e-3, 1e-3, 5.0});
    phantom.inclusions.push_back({PhantomShape::Kind::rectangle, 4.5e-3, 14e-3, 2e-3, 2e-3, 5.0});
    phantom.inclusions.push_back({PhantomShape::Kind::rectangle, 8e-3, 16e-3, 1.5e-3, 1.5e-3, 5.0});

    const RegionMask mask = inclusion_mask(phantom, grid);
    CHECK(connected_components(mask) == 4);

    const AttenuationImage image = rasterize(phantom, grid);
    const RegionMask thresholded = threshold_mask(image, 3.0);
    CHECK(thresholded.inside == mask.inside);
    CHECK(connected_components(thresholded, 2) == 4);
    // A size filter drops the single-cell speck but keeps real components.
    RegionMask with_speck = mask;
    with_speck.inside[grid.cell_index(30, 30)] = 1;
    CHECK(connected_components(with_speck) == 5);
    CHECK(connected_components(with_speck, 3) == 4);
}
