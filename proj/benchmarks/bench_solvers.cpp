#include "fracbound/eigenbasis.hpp"
#include "fracbound/montecarlo.hpp"
#include "fracbound/spectral.hpp"
#include "fracbound/subordinate.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

constexpr double pi = std::numbers::pi;

void BM_ProjectBump1D(benchmark::State& state) {
    const BoxDomain line = BoxDomain::interval(pi);
    const auto f = InitialDatum::bump({1.3, 0, 0}, 1.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(project(line, f, n));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ProjectBump1D)->Arg(64)->Arg(512);

void BM_ProjectBump2D(benchmark::State& state) {
    const BoxDomain sq({1.0, 1.0});
    const auto f = InitialDatum::bump({0.5, 0.4, 0}, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(project(sq, f, 256));
}
BENCHMARK(BM_ProjectBump2D)->Unit(benchmark::kMillisecond);

// Spectral field on 64 points, fresh kernel cache each iteration.
void BM_SpectralField(benchmark::State& state) {
    const BoxDomain line = BoxDomain::interval(pi);
    const auto f = InitialDatum::bump({1.3, 0, 0}, 1.0);
    const MixingMeasure m({}, DensityComponent::constant(0.25, 0.75, 2.0));
    std::vector<Point> xs;
    for (int i = 0; i < 64; ++i) xs.push_back({pi * i / 63.0, 0, 0});
    SpectralOptions opts;
    opts.threads = 1;
    for (auto _ : state) {
        const SpectralSolution sol(line, f, m, static_cast<std::size_t>(state.range(0)), opts);
        benchmark::DoNotOptimize(evaluate_field(sol, {0.5, 1.0}, xs));
    }
}
BENCHMARK(BM_SpectralField)->Arg(32)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_StableVariate(benchmark::State& state) {
    RandomStream rng(1, 0);
    const double beta = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_stable(beta, rng));
}
BENCHMARK(BM_StableVariate)->Arg(3)->Arg(5)->Arg(9);

void BM_SubordinatorPath(benchmark::State& state) {
    const SubordinatorSpec spec({StableComponent{0.3, 1.0}, StableComponent{0.8, 0.5}});
    RandomStream rng(2, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_path(spec, 1.0, 1e-3, rng));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SubordinatorPath);

void BM_InverseFirstPassage(benchmark::State& state) {
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    RandomStream rng(3, 0);
    for (auto _ : state) benchmark::DoNotOptimize(sample_inverse(spec, 1.0, 1e-3, rng));
}
BENCHMARK(BM_InverseFirstPassage);

void BM_EstimateU(benchmark::State& state) {
    const BoxDomain line = BoxDomain::interval(pi);
    const auto f = InitialDatum::eigenmode({1, 0, 0});
    const SubordinatorSpec spec({StableComponent{0.5, 1.0}});
    McOptions opts;
    opts.threads = 1;
    const auto paths = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_u(line, f, spec, 1.0, {pi / 2, 0, 0}, paths, 4, opts));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateU)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
