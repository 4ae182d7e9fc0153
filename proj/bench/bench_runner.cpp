#include <benchmark/benchmark.h>

#include <omp.h>

#include "reb/harness.hpp"

namespace {

std::vector<reb::PolicyConfig> policies() {
    reb::PolicyConfig re;
    re.kind = reb::PolicyKind::reucb;
    re.label = "ReUCB";
    reb::PolicyConfig ucb;
    ucb.kind = reb::PolicyKind::ucb1;
    ucb.label = "UCB1";
    ucb.variance_params.sigma_sq = 0.25;
    reb::PolicyConfig ts;
    ts.kind = reb::PolicyKind::gaussian_ts;
    ts.label = "TS";
    ts.variance_params.sigma_sq = 0.25;
    ts.prior = reb::GaussianPrior{1.0, 0.04};
    return {re, ucb, ts};
}

const auto kSampler = reb::prior_sampler(reb::GaussianPrior{1.0, 0.04}, reb::GaussianReward{0.25}, 50);
constexpr std::int64_t kHorizon = 2000;

void BM_serial(benchmark::State& state) {
    const auto ps = policies();
    for (auto _ : state) {
        auto r = reb::run_experiment_serial(ps, kSampler, kHorizon, state.range(0), 1);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_parallel(benchmark::State& state) {
    const auto ps = policies();
    const int threads = static_cast<int>(state.range(1));
    for (auto _ : state) {
        auto r = reb::run_experiment(ps, kSampler, kHorizon, state.range(0), 1, {threads, false});
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = threads;
}

}  // namespace

BENCHMARK(BM_serial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_parallel)
    ->ArgsProduct({{32}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
