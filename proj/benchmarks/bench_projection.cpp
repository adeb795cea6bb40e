#include <benchmark/benchmark.h>

#include <sgfs/sgfs.hpp>

namespace {

sgfs::ProjectionInstance instance(sgfs::Index p) {
    sgfs::ProjBenchSpec spec;
    spec.p = p;
    spec.seed = 1;
    return sgfs::gen_projection_instance(spec);
}

void BM_Sglp(benchmark::State& state) {
    const auto inst = instance(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sgfs::sglp(inst.v, inst.budget.s1, inst.budget.s2, inst.partition).x.data());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sglp)->RangeMultiplier(10)->Range(100, 1000000)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_L1BallProjection(benchmark::State& state) {
    const auto inst = instance(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sgfs::l1_ball_projection(inst.v, inst.budget.s1).data());
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_L1BallProjection)->RangeMultiplier(10)->Range(100, 1000000)->Unit(benchmark::kMicrosecond)->Complexity();

// Baselines stop within 1e-3 of the exact objective.
template <bool Admm>
void BM_Baseline(benchmark::State& state) {
    const auto inst = instance(state.range(0));
    const auto exact = sgfs::sglp(inst.v, inst.budget.s1, inst.budget.s2, inst.partition).x;
    sgfs::StopRule stop;
    stop.target_objective = 0.5 * (exact - inst.v).squaredNorm();
    for (auto _ : state) {
        if constexpr (Admm)
            benchmark::DoNotOptimize(sgfs::admm_project(inst.v, inst.budget.s1, inst.budget.s2, inst.partition, stop).x.data());
        else
            benchmark::DoNotOptimize(sgfs::dykstra_project(inst.v, inst.budget.s1, inst.budget.s2, inst.partition, stop).x.data());
    }
}
BENCHMARK(BM_Baseline<true>)->Name("BM_Admm")->RangeMultiplier(10)->Range(100, 100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Baseline<false>)->Name("BM_Dykstra")->RangeMultiplier(10)->Range(100, 100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
