#include <benchmark/benchmark.h>

#include "spde2d/model.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/theory.hpp"

using namespace spde2d;

static void BM_BesselJ0Small(benchmark::State& state) {
    double x = 0.0, acc = 0.0;
    for (auto _ : state) {
        acc += bessel_j0(x);
        x += 0.37;
        if (x > 11.0) x -= 11.0;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BesselJ0Small);

static void BM_BesselJ0Large(benchmark::State& state) {
    double x = 12.0, acc = 0.0;
    for (auto _ : state) {
        acc += bessel_j0(x);
        x += 0.37;
        if (x > 500.0) x -= 488.0;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BesselJ0Large);

static void BM_Psi(benchmark::State& state) {
    const double alpha = state.range(0) / 100.0;
    for (auto _ : state) {
        const PsiResult p = psi(PsiQuery(1.0, alpha, 0.2));
        benchmark::DoNotOptimize(p.value);
    }
}
BENCHMARK(BM_Psi)->Arg(30)->Arg(50)->Arg(150);

static void BM_ExpectedQv(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const SpdeCoefficients coeffs(0.0, 0.2, 0.2, 0.2, 1.0);
    const NoiseSpec noise(0.5, -19.5, k, k);
    const ThinnedDesign design = build_design(0.1, 20, 100);
    for (auto _ : state) {
        const double v = expected_quadratic_variation(design, coeffs, noise);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_ExpectedQv)->Arg(500)->Arg(2000);

BENCHMARK_MAIN();
