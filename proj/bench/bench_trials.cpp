// Serial reference vs OpenMP kernels on the two hot Monte Carlo loops.
#include <benchmark/benchmark.h>

#include "misolab/montecarlo.hpp"

using namespace misolab;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_SchemeRate(benchmark::State& state) {
    const SchemeConfig cfg = make_scheme_config(ChannelConfig{64, 8, 10.0, Constraint::SecondMoment, 1.0});
    for (auto _ : state) benchmark::DoNotOptimize(estimate_scheme_rate(cfg, 20'000, kDefaultSeed, mode(state)));
    state.SetItemsProcessed(state.iterations() * 20'000);
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_BlockMoments(benchmark::State& state) {
    const Encoder enc = random_mixing_encoder(1);
    const ChannelConfig cfg{8, 8, 10.0, Constraint::SecondMoment, 1.0};
    for (auto _ : state) benchmark::DoNotOptimize(collect_block_moments(enc, cfg, 10'000, kDefaultSeed, mode(state)));
    state.SetItemsProcessed(state.iterations() * 10'000);
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_QuadraticForm(benchmark::State& state) {
    const HermitianMat eye = HermitianMat::Identity(6, 6);
    for (auto _ : state)
        benchmark::DoNotOptimize(quadratic_fourth_moment_mc(eye, eye, 50'000, kDefaultSeed, mode(state)));
    state.SetItemsProcessed(state.iterations() * 50'000);
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

}  // namespace

BENCHMARK(BM_SchemeRate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlockMoments)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuadraticForm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
