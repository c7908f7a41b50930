#include <benchmark/benchmark.h>

#include "uat/system_matrix.hpp"

namespace {

uat::AcquisitionGeometry reference_geometry() {
    return uat::AcquisitionGeometry{128, 300e-6, 30e-3};
}

void BuildSystemMatrix(benchmark::State& state) {
    const auto geom = reference_geometry();
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = uat::make_grid(geom, n, n);
    for (auto _ : state) {
        auto matrix = uat::build_system_matrix(geom, grid);
        benchmark::DoNotOptimize(matrix.nnz());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildSystemMatrix)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond)->Complexity();

void ApplyForward(benchmark::State& state) {
    const auto geom = reference_geometry();
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = uat::make_grid(geom, n, n);
    const auto matrix = uat::build_system_matrix(geom, grid);
    std::vector<double> x(matrix.cols(), 1.0), y(matrix.rows());
    for (auto _ : state) {
        matrix.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(ApplyForward)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void ApplyTranspose(benchmark::State& state) {
    const auto geom = reference_geometry();
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = uat::make_grid(geom, n, n);
    const auto matrix = uat::build_system_matrix(geom, grid);
    std::vector<double> v(matrix.rows(), 1.0), y(matrix.cols());
    for (auto _ : state) {
        matrix.apply_transpose(v, y);
        benchmark::DoNotOptimize(y.data());
    }
}
BENCHMARK(ApplyTranspose)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace
