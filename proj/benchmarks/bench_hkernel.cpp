#include "fracbound/hkernel.hpp"
#include "fracbound/mittag_leffler.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

using namespace fracbound;

namespace {

MixingMeasure half_atom() { return MixingMeasure::single_atom(0.5, 1.0 / std::sqrt(std::numbers::pi)); }
MixingMeasure flat_density() { return MixingMeasure({}, DensityComponent::constant(0.25, 0.75, 2.0)); }
MixingMeasure two_atoms() { return MixingMeasure({Atom{0.3, 0.7}, Atom{0.8, 0.4}}); }

// Arg: lambda
void BM_MittagLefflerRoute(benchmark::State& state) {
    const HEvaluator ev(half_atom(), HRoute::MittagLeffler);
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate_with(HRoute::MittagLeffler, 1.0, lambda));
}
BENCHMARK(BM_MittagLefflerRoute)->Arg(1)->Arg(25)->Arg(1000);

void BM_KochubeiRoute(benchmark::State& state) {
    const HEvaluator ev(flat_density(), HRoute::Kochubei);
    const double lambda = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate_with(HRoute::Kochubei, 1.0, lambda));
}
BENCHMARK(BM_KochubeiRoute)->Arg(1)->Arg(25)->Arg(1000);

void BM_Talbot(benchmark::State& state) {
    const HEvaluator ev(state.range(0) == 0 ? two_atoms() : flat_density(), HRoute::LaplaceInversion);
    for (auto _ : state) benchmark::DoNotOptimize(ev.invert(InversionMethod::Talbot, 1.0, 5.0));
}
BENCHMARK(BM_Talbot)->Arg(0)->Arg(1)->ArgNames({"density"});

void BM_GaverStehfest(benchmark::State& state) {
    const HEvaluator ev(two_atoms(), HRoute::LaplaceInversion);
    for (auto _ : state) benchmark::DoNotOptimize(ev.invert(InversionMethod::GaverStehfest, 1.0, 5.0));
}
BENCHMARK(BM_GaverStehfest);

void BM_MittagLeffler(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mittag_leffler(0.3, -x));
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(20)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
