#include <esnlab/experiment.hpp>
#include <esnlab/models.hpp>
#include <esnlab/reservoir.hpp>
#include <esnlab/training.hpp>

#include <benchmark/benchmark.h>

#include <vector>

using namespace esnlab;

namespace {

EsnConfig narma_config(int n) {
    return make_config(parse_model_label("V2-FT-GI-DU"), protocol(BenchmarkKind::narma10), n);
}

void BM_Build(benchmark::State& state) {
    const EsnConfig c = narma_config(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(build(c, seed++));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Build)->RangeMultiplier(2)->Range(50, 800)->Complexity()->Unit(benchmark::kMillisecond);

void BM_SpectralRadius(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    Rng rng(1);
    const Matrix w = sample_matrix(WeightDistribution::uniform, n, n, 0.15, rng);
    for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(w));
    state.SetComplexityN(n);
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(2)->Range(50, 800)->Complexity()->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
    const EsnConfig c = narma_config(static_cast<int>(state.range(0)));
    const WeightSet w = build(c, 0);
    ReservoirState s = zero_state(c);
    const double u = 0.25;
    for (auto _ : state) {
        step_in_place(s, {&u, 1}, {}, w, c);
        benchmark::DoNotOptimize(s.x.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Step)->RangeMultiplier(2)->Range(50, 1600)->Complexity();

void BM_FitRidge(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    const Matrix design = Matrix::Random(n, 1000);
    const Matrix targets = Matrix::Random(1, 1000);
    for (auto _ : state) benchmark::DoNotOptimize(fit_ridge(design, targets, 1e-6));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitRidge)->RangeMultiplier(2)->Range(50, 800)->Complexity()->Unit(benchmark::kMillisecond);

void BM_NarmaRun(benchmark::State& state) {
    static const Task task = make_task(BenchmarkKind::narma10, 0);
    const EsnConfig c = narma_config(static_cast<int>(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_once(c, heuristic_ridge_beta, task, seed++));
}
BENCHMARK(BM_NarmaRun)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace
