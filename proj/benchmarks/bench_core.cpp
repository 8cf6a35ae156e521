#include <benchmark/benchmark.h>

#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/cylinders.hpp"
#include "coarsecyl/fixtures.hpp"
#include "coarsecyl/slices.hpp"

using namespace coarsecyl;

namespace {

void BM_Distance(benchmark::State& state) {
    auto g = fixtures::ladder_graph(static_cast<std::size_t>(state.range(0)));
    const VertexId far = static_cast<VertexId>(2 * state.range(0) - 1);
    for (auto _ : state) benchmark::DoNotOptimize(distance(g, 0, far));
}
BENCHMARK(BM_Distance)->Arg(64)->Arg(512);

void BM_AllGeodesics(benchmark::State& state) {
    auto g = fixtures::ladder_graph(static_cast<std::size_t>(state.range(0)));
    const VertexId far = static_cast<VertexId>(2 * state.range(0) - 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(all_geodesics(g, 0, far, 64).paths.size());
}
BENCHMARK(BM_AllGeodesics)->Arg(8)->Arg(16);

void BM_Cone(benchmark::State& state) {
    auto g = fixtures::theta_graph(4, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(cone(g, {0, 2}, 0,
                                      static_cast<std::uint32_t>(state.range(0)),
                                      state.range(0)).size());
}
BENCHMARK(BM_Cone)->Arg(2)->Arg(4);

void BM_Hyperbolicity(benchmark::State& state) {
    auto g = fixtures::cycle_graph(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(hyperbolicity_delta(g).delta_raw);
}
BENCHMARK(BM_Hyperbolicity)->Arg(6)->Arg(10);

void BM_Cylinder(benchmark::State& state) {
    auto g = fixtures::ladder_graph(static_cast<std::size_t>(state.range(0)));
    auto C = ConstantSet::exploratory(1, 2, 2, 2, 10, 2);
    const VertexId far = static_cast<VertexId>(2 * state.range(0) - 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            cylinder(g, 0, far, 2, C, 64'000'000).members.size());
}
BENCHMARK(BM_Cylinder)->Arg(8)->Arg(24);

void BM_OrderSlices(benchmark::State& state) {
    auto g = fixtures::ladder_graph(static_cast<std::size_t>(state.range(0)));
    auto C = ConstantSet::exploratory(1, 2, 2, 2, 1000, 2);
    const VertexId far = static_cast<VertexId>(2 * state.range(0) - 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            order_slices(g, 0, far, 2, C, 64'000'000).slices.size());
}
BENCHMARK(BM_OrderSlices)->Arg(16)->Arg(48);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
    return 0;
}
