#include <benchmark/benchmark.h>

#include <vector>

#include "spde2d/estimator.hpp"
#include "spde2d/rng.hpp"
#include "spde2d/sampling.hpp"

using namespace spde2d;

namespace {

FieldSample random_field(const ThinnedDesign& design) {
    FieldSample f;
    f.times = design.times;
    f.ys = design.ys;
    f.zs = design.ys;
    f.values.resize(f.times.size() * f.ys.size() * f.zs.size());
    GaussianStream g(stream_key(5, 5, 5, 5));
    for (double& v : f.values) v = g.next();
    return f;
}

}  // namespace

static void BM_TripleIncrements(benchmark::State& state) {
    const int m1 = static_cast<int>(state.range(0));
    const ThinnedDesign design = build_design(0.1, m1, 200);
    const FieldSample f = random_field(design);
    for (auto _ : state) {
        const IncrementCube cube = triple_increments(f);
        benchmark::DoNotOptimize(cube.values.data());
    }
    state.SetItemsProcessed(state.iterations() * design.n_steps *
                            static_cast<std::int64_t>(m1) * m1);
}
BENCHMARK(BM_TripleIncrements)->Arg(20)->Arg(40);

static void BM_StreamingEstimate(benchmark::State& state) {
    const int m1 = static_cast<int>(state.range(0));
    const ThinnedDesign design = build_design(0.1, m1, 200);
    const FieldSample f = random_field(design);
    for (auto _ : state) {
        const AlphaEstimate est = estimate_from_field(f, design);
        benchmark::DoNotOptimize(est.alpha_hat);
    }
    state.SetItemsProcessed(state.iterations() * design.n_steps *
                            static_cast<std::int64_t>(m1) * m1);
}
BENCHMARK(BM_StreamingEstimate)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
