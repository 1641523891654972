#include <benchmark/benchmark.h>

#include <vector>

#include "tempertail/estimation.hpp"
#include "tempertail/lepage.hpp"
#include "tempertail/models.hpp"
#include "tempertail/samplers.hpp"
#include "tempertail/shortsell.hpp"

namespace {

using namespace tempertail;

void BM_PhiloxWord(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxWord);

void BM_Exponential(benchmark::State& state) {
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.exponential());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Exponential);

void BM_Normal(benchmark::State& state) {
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Normal);

void BM_Sibuya(benchmark::State& state) {
  Rng rng(4);
  const double gamma = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(samplers::sample_sibuya(gamma, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Sibuya)->Arg(20)->Arg(50)->Arg(90);

void BM_PositiveStable(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(samplers::sample_positive_stable(0.7, 1.0, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PositiveStable);

void BM_LePageNewton(benchmark::State& state) {
  lepage::LePageConfig cfg;
  cfg.scenario = lepage::Scenario::Newton;
  cfg.multiplier = lepage::default_multiplier(cfg.scenario);
  cfg.terms = state.range(0);
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(lepage::simulate_lepage(cfg, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LePageNewton)->Arg(1'000)->Arg(10'000);

void BM_ShortSellSeries(benchmark::State& state) {
  const shortsell::ShortSellConfig cfg{};
  double s = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortsell::analytic_ls(s, cfg));
    s = s == 0.5 ? 0.51 : 0.5;
  }
}
BENCHMARK(BM_ShortSellSeries);

void BM_TruncSubGaussianCf(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(models::trunc_subgaussian_cf(1.3, 0.5, 4.0));
}
BENCHMARK(BM_TruncSubGaussianCf)->Unit(benchmark::kMillisecond);

void BM_Hill(benchmark::State& state) {
  const auto batch = samplers::sample(models::Pareto{1.5}, static_cast<std::size_t>(state.range(0)), RngState{7, 0});
  for (auto _ : state) benchmark::DoNotOptimize(estimation::hill(batch.values));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Hill)->Arg(10'000)->Arg(1'000'000);

}  // namespace
