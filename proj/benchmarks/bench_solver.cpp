#include <benchmark/benchmark.h>

#include "uat/phantom.hpp"
#include "uat/recon.hpp"
#include "uat/simulator.hpp"
#include "uat/system_matrix.hpp"

namespace {

// Noiseless single-inclusion reconstruction, end to end.
void SolveInclusion(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const uat::AcquisitionGeometry geom{64, 300e-6, 30e-3};
    const auto grid = uat::make_grid(geom, n, n);
    const auto paths = uat::build_system_matrix(geom, grid);

    uat::PhantomSpec phantom;
    phantom.background_attenuation = uat::db_per_cm_to_np_per_m(0.5);
    phantom.inclusions.push_back({uat::PhantomShape::Kind::ellipse, geom.aperture() / 2, 15e-3,
                                  3e-3, 3e-3, uat::db_per_cm_to_np_per_m(1.5)});
    const auto alpha = uat::rasterize(phantom, grid);

    const uat::MediaSet media{uat::water_at_20c(), uat::tissue_default(), uat::plexiglas()};
    const auto sim = uat::simulate_measurement(alpha, paths, geom, media, uat::NoiseSpec{});
    const auto data = uat::normalize(sim.tissue, sim.water, media.tissue, media.water,
                                     media.reflector, geom, true);

    for (auto _ : state) {
        auto result = uat::solve(paths, data, grid);
        benchmark::DoNotOptimize(result.report.iterations);
    }
}
BENCHMARK(SolveInclusion)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
