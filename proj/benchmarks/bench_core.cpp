// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "jumpsde/harness.hpp"
#include "jumpsde/jet.hpp"
#include "jumpsde/jump_maps.hpp"

using namespace jumpsde;

namespace {

void BM_Eval(benchmark::State& state) {
    const Expr e = parse("sin(x)*exp(-t) + x^2");
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval(e, x, 0.5));
    }
}
BENCHMARK(BM_Eval);

void BM_EvalJet(benchmark::State& state) {
    const Expr e = parse("sin(x)*exp(-t) + x^2");
    const auto order = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_jet(e, 0.3, 0.5, order));
    }
}
BENCHMARK(BM_EvalJet)->Arg(2)->Arg(6)->Arg(12);

void BM_DfSeries(benchmark::State& state) {
    const Expr g = parse("sin(x)");
    const auto k = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(df_series_jump(g, 0.02, 0, 0.8, k));
    }
}
BENCHMARK(BM_DfSeries)->Arg(6)->Arg(12);

void BM_MarcusJump(benchmark::State& state) {
    const Expr g = parse("sin(x)");
    const auto scheme = state.range(0) == 2 ? RkScheme::RK2 : RkScheme::RK4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(marcus_jump(g, 0.02, 0, 0.8, scheme, 0.1));
    }
}
BENCHMARK(BM_MarcusJump)->Arg(2)->Arg(4);

void BM_SimulatePath(benchmark::State& state) {
    const SdeModel model{parse("x"), parse("x"), 1.0, std::nullopt};
    const auto path = sample_path(10, 1, AmplitudeDistribution{}, 42);
    SimConfig cfg;
    cfg.horizon = 1;
    cfg.dt = 0.01;
    cfg.interpretation = MarcusOde{RkScheme::RK2, 0.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(model, path, cfg));
    }
}
BENCHMARK(BM_SimulatePath);

}  // namespace
BENCHMARK_MAIN();
