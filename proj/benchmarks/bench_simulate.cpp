#include <benchmark/benchmark.h>

#include <vector>

#include "spde2d/model.hpp"
#include "spde2d/rng.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/simulate.hpp"

using namespace spde2d;

namespace {
const SpdeCoefficients kCoeffs(0.0, 0.2, 0.2, 0.2, 1.0);
}

static void BM_GaussianStream(benchmark::State& state) {
    GaussianStream g(stream_key(1, 2, 3, 4));
    double acc = 0.0;
    for (auto _ : state) acc += g.next();
    benchmark::DoNotOptimize(acc);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GaussianStream);

static void BM_Evolve(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const NoiseSpec noise(0.5, -19.5, k, k);
    const OuTransition t = make_transition(kCoeffs, noise, 1e-3);
    ModeState s(k, k, 7, 0);
    for (auto _ : state) evolve(s, t);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k) * k);
}
BENCHMARK(BM_Evolve)->Arg(128)->Arg(512)->Arg(1000);

static void BM_EvaluateField(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const int coords = static_cast<int>(state.range(1));
    const NoiseSpec noise(0.5, -19.5, k, k);
    ModeState s(k, k, 7, 0);
    GaussianStream g(stream_key(9, 9, 9, 9));
    for (double& x : s.coeffs) x = g.next();
    std::vector<double> ys(coords);
    for (int j = 0; j < coords; ++j) ys[j] = 0.1 + 0.8 * j / (coords - 1);
    const FieldEvaluator evaluator(kCoeffs, k, k, ys, ys);
    std::vector<double> slice(static_cast<std::size_t>(coords) * coords), scratch;
    for (auto _ : state) {
        evaluator.eval(s, slice, scratch);
        benchmark::DoNotOptimize(slice.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(k) * k * coords);
}
BENCHMARK(BM_EvaluateField)->Args({512, 21})->Args({1000, 21})->Args({1000, 41});

static void BM_SimulateDataset(benchmark::State& state) {
    const NoiseSpec noise(0.5, -19.5, 64, 64);
    const ThinnedDesign design = build_design(0.1, 10, 100);
    std::uint64_t rep = 0;
    for (auto _ : state) {
        const FieldSample f = simulate_dataset(kCoeffs, noise, design, 11, rep++);
        benchmark::DoNotOptimize(f.values.data());
    }
}
BENCHMARK(BM_SimulateDataset);

BENCHMARK_MAIN();
