// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "moodpupilar/domain.hpp"
#include "moodpupilar/features.hpp"
#include "moodpupilar/gbdt.hpp"
#include "moodpupilar/simgen.hpp"

namespace {

using namespace moodpupilar;

void BM_PeriodStats(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.2, 0.7);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(features::period_stats(values));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PeriodStats)->Arg(4)->Arg(16)->Arg(64);

void BM_BuildDayRows(benchmark::State& state) {
  simgen::CohortConfig config;
  config.seed = 1;
  const auto events = filter_pir(simgen::generate_cohort(config).events, PirRange{}).kept;
  for (auto _ : state) benchmark::DoNotOptimize(features::build_day_rows(events));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_BuildDayRows)->Unit(benchmark::kMillisecond);

void BM_FitGbdt(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  learn::Matrix x(n, features::kNumFeatures);
  std::vector<int> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) = normal(rng);
    y[r] = x(r, 0) + 0.5 * normal(rng) > 0 ? 1 : 0;
  }
  learn::GbdtParams params;
  for (auto _ : state) benchmark::DoNotOptimize(learn::fit_gbdt(x, y, params));
}
BENCHMARK(BM_FitGbdt)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_GenerateCohort(benchmark::State& state) {
  simgen::CohortConfig config;
  for (auto _ : state) {
    ++config.seed;
    benchmark::DoNotOptimize(simgen::generate_cohort(config));
  }
}
BENCHMARK(BM_GenerateCohort)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
