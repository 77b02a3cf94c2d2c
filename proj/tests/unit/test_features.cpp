// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

#include "moodpupilar/features.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace moodpupilar::features {
namespace {

using testing::day;
using testing::event;

TEST(FeatureSchema, CanonicalOrder) {
  const auto& names = FeatureSchema::canonical().names();
  ASSERT_EQ(names.size(), 48u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 48u);
  EXPECT_EQ(names[0], "left_midnight_sum");
  EXPECT_EQ(names[5], "left_midnight_std");
  EXPECT_EQ(names[6], "left_morning_sum");
  EXPECT_EQ(names[24], "right_midnight_sum");
  EXPECT_EQ(names[feature_index(Eye::right, Period::afternoon, Stat::median)], "right_afternoon_median");
}

TEST(PeriodStats, ThreeValues) {
  const std::vector<double> v{0.3, 0.4, 0.5};
  const auto s = period_stats(v);
  ASSERT_TRUE(s);
  const auto o = oracle::sort_and_scan(v);
  EXPECT_NEAR(s->sum, 1.2, 1e-15);
  EXPECT_EQ(s->min, 0.3);
  EXPECT_EQ(s->max, 0.5);
  EXPECT_NEAR(s->mean, 0.4, 1e-15);
  EXPECT_EQ(s->median, 0.4);
  EXPECT_NEAR(s->std, 0.1, 1e-15);
  for (const auto stat : kStats) EXPECT_TRUE(oracle::close(s->get(stat), o.values[static_cast<int>(stat)], 1e-12));
}

TEST(PeriodStats, SingletonAndEmpty) {
  const std::vector<double> one{0.5};
  const auto s = period_stats(one);
  ASSERT_TRUE(s);
  for (const auto stat : {Stat::sum, Stat::min, Stat::max, Stat::mean, Stat::median}) EXPECT_EQ(s->get(stat), 0.5);
  EXPECT_EQ(s->std, 0.0);
  EXPECT_FALSE(period_stats({}));
}

TEST(PeriodStats, EvenCountMedianIsMidpoint) {
  const std::vector<double> v{0.6, 0.2, 0.4, 0.3};
  EXPECT_DOUBLE_EQ(period_stats(v)->median, 0.35);
}

TEST(PeriodStats, MatchesOracleAndIsOrderFree) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 0.7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v) x = u(rng);
    const auto s = period_stats(v);
    const auto o = oracle::sort_and_scan(v);
    for (const auto stat : kStats) {
      EXPECT_TRUE(oracle::close(s->get(stat), o.values[static_cast<int>(stat)], 1e-12, 1e-15));
    }
    std::shuffle(v.begin(), v.end(), rng);
    const auto t = period_stats(v);
    for (const auto stat : kStats) EXPECT_EQ(s->get(stat), t->get(stat));
  }
}

CellVector empty_cells() { return {}; }

TEST(ImputeMissing, SameDayDonorsAverage) {
  auto cells = empty_cells();
  for (const auto s : kStats) {
    cells[feature_index(Eye::left, Period::morning, s)] = 0.4;
    cells[feature_index(Eye::left, Period::afternoon, s)] = 0.5;
  }
  const auto out = impute_missing(cells, empty_cells(), empty_cells());
  EXPECT_DOUBLE_EQ(out.values[feature_index(Eye::left, Period::evening, Stat::mean)], 0.45);
  EXPECT_DOUBLE_EQ(out.values[feature_index(Eye::left, Period::midnight, Stat::mean)], 0.45);
  EXPECT_TRUE(out.mask[feature_index(Eye::left, Period::evening, Stat::mean)]);
  EXPECT_FALSE(out.mask[feature_index(Eye::left, Period::morning, Stat::mean)]);
}

TEST(ImputeMissing, FallbackChain) {
  auto cells = empty_cells();
  for (const auto s : kStats) cells[feature_index(Eye::left, Period::morning, s)] = 0.4;
  auto history = empty_cells();
  auto cohort = empty_cells();
  const auto i_hist = feature_index(Eye::right, Period::morning, Stat::max);
  const auto i_cohort = feature_index(Eye::right, Period::evening, Stat::max);
  const auto i_last = feature_index(Eye::right, Period::midnight, Stat::max);
  history[i_hist] = 0.61;
  cohort[i_hist] = 0.99;
  cohort[i_cohort] = 0.52;

  const auto same_day = impute_missing(cells, history, cohort, ImputationPolicy::same_day_first);
  EXPECT_EQ(same_day.values[i_hist], 0.61);
  EXPECT_EQ(same_day.values[i_cohort], 0.52);
  EXPECT_EQ(same_day.values[i_last], 0.4);

  auto right_cells = cells;
  right_cells[feature_index(Eye::right, Period::afternoon, Stat::max)] = 0.3;
  const auto history_first = impute_missing(right_cells, history, cohort, ImputationPolicy::history_first);
  EXPECT_EQ(history_first.values[i_hist], 0.61);
  EXPECT_EQ(history_first.values[i_last], 0.3);
  const auto day_first = impute_missing(right_cells, history, cohort, ImputationPolicy::same_day_first);
  EXPECT_EQ(day_first.values[i_hist], 0.3);
}

TEST(ImputeMissing, NoMissingIsIdentity) {
  CellVector cells;
  for (std::size_t i = 0; i < kNumFeatures; ++i) cells[i] = 0.001 * static_cast<double>(i);
  const auto out = impute_missing(cells, empty_cells(), empty_cells());
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    EXPECT_EQ(out.values[i], *cells[i]);
    EXPECT_FALSE(out.mask[i]);
  }
}

TEST(ImputeMissing, AllMissingThrows) {
  try {
    impute_missing(empty_cells(), empty_cells(), empty_cells());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllCellsMissing);
  }
}

TEST(BuildDayRows, OnlyLeftMorning) {
  const auto d = day(2021, 4, 1);
  const std::vector<PirEvent> events{event("P1", d, 8, Eye::left, 0.4), event("P1", d, 9, Eye::left, 0.5)};
  const auto rows = build_day_rows(events);
  ASSERT_EQ(rows.size(), 1u);
  const auto& mask = rows[0].imputed_mask;
  EXPECT_EQ(std::count(mask.begin(), mask.end(), false), 6);
  EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 42);
  EXPECT_DOUBLE_EQ(rows[0].features[feature_index(Eye::left, Period::morning, Stat::sum)], 0.9);
  EXPECT_FALSE(rows[0].labeled());
}

TEST(BuildDayRows, DaysWithoutEventsAreAbsent) {
  const std::vector<PirEvent> events{event("P1", day(2021, 4, 1), 8, Eye::left, 0.4),
                                     event("P1", day(2021, 4, 3), 8, Eye::left, 0.4)};
  const auto rows = build_day_rows(events);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].key.date, day(2021, 4, 1));
  EXPECT_EQ(rows[1].key.date, day(2021, 4, 3));
  EXPECT_TRUE(build_day_rows({}).empty());
}

TEST(BuildDayRows, FullyObservedDayHasNoImputation) {
  std::vector<PirEvent> events;
  for (const auto eye : kEyes) {
    for (const int hour : {2, 8, 14, 20}) events.push_back(event("P1", day(2021, 4, 1), hour, eye, 0.3 + hour / 100.0));
  }
  const auto rows = build_day_rows(events);
  ASSERT_EQ(rows.size(), 1u);
  for (const bool m : rows[0].imputed_mask) EXPECT_FALSE(m);
}

TEST(BuildDayRows, AbsentEyeTakesCohortMeans) {
  const auto d = day(2021, 4, 1);
  std::vector<PirEvent> events{event("P1", d, 8, Eye::left, 0.4)};
  for (const int hour : {2, 8, 14, 20}) events.push_back(event("P2", d, hour, Eye::right, 0.5 + hour / 100.0));
  events.push_back(event("P2", d, 9, Eye::left, 0.45));
  const auto rows = build_day_rows(events);
  ASSERT_EQ(rows.size(), 2u);
  const auto& p1 = rows[0];
  const auto& p2 = rows[1];
  for (const auto p : kPeriods) {
    for (const auto s : kStats) {
      const auto i = feature_index(Eye::right, p, s);
      EXPECT_TRUE(p1.imputed_mask[i]);
      EXPECT_EQ(p1.features[i], p2.features[i]);
    }
  }
}

TEST(BuildDayRows, RowsSortedByKey) {
  const std::vector<PirEvent> events{event("P2", day(2021, 4, 1), 8, Eye::left, 0.4),
                                     event("P1", day(2021, 4, 2), 8, Eye::left, 0.4),
                                     event("P1", day(2021, 4, 1), 8, Eye::left, 0.4)};
  const auto rows = build_day_rows(events);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.key < b.key; }));
}

std::vector<PirEvent> random_events(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.2, 0.7);
  std::vector<PirEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    events.push_back(event(fmt::format("P{}", rng() % 4), day(2021, 4, 1 + static_cast<unsigned>(rng() % 5)),
                           static_cast<int>(rng() % 24), rng() % 2 ? Eye::left : Eye::right, u(rng),
                           static_cast<int>(rng() % 60)));
  }
  return events;
}

TEST(BuildDayRows, Invariants) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto events = random_events(rng, 1 + rng() % 80);
    const auto build = build_day_rows_detailed(events);
    ASSERT_EQ(build.rows.size(), build.cell_counts.size());
    for (std::size_t r = 0; r < build.rows.size(); ++r) {
      const auto& row = build.rows[r];
      const auto& counts = build.cell_counts[r];
      EXPECT_GE(std::count(row.imputed_mask.begin(), row.imputed_mask.end(), false), 6);
      for (const auto e : kEyes) {
        for (const auto p : kPeriods) {
          const auto at = [&](Stat s) { return row.features[feature_index(e, p, s)]; };
          const auto i = feature_index(e, p, Stat::sum);
          for (const auto s : kStats) {
            EXPECT_TRUE(std::isfinite(at(s)));
            EXPECT_EQ(row.imputed_mask[feature_index(e, p, s)], counts[feature_index(e, p, s)] == 0);
          }
          if (row.imputed_mask[i]) continue;
          EXPECT_LE(at(Stat::min), at(Stat::median));
          EXPECT_LE(at(Stat::median), at(Stat::max));
          EXPECT_LE(at(Stat::min), at(Stat::mean));
          EXPECT_LE(at(Stat::mean), at(Stat::max));
          EXPECT_NEAR(at(Stat::sum), at(Stat::mean) * counts[i], 1e-12);
        }
      }
    }
  }
}

TEST(BuildDayRows, PermutationInvariantAndPolicyIndependentForObservedCells) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    auto events = random_events(rng, 60);
    const auto rows = build_day_rows(events);
    std::shuffle(events.begin(), events.end(), rng);
    EXPECT_EQ(build_day_rows(events), rows);
    FeaturizeOptions alt;
    alt.policy = ImputationPolicy::history_first;
    const auto other = build_day_rows(events, FeatureSchema::canonical(), alt);
    ASSERT_EQ(other.size(), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      EXPECT_EQ(other[r].imputed_mask, rows[r].imputed_mask);
      for (std::size_t i = 0; i < kNumFeatures; ++i) {
        if (!rows[r].imputed_mask[i]) {
          EXPECT_EQ(other[r].features[i], rows[r].features[i]);
        }
      }
    }
  }
}

TEST(BuildDayRows, PeriodBoundariesAreConfigurable) {
  const std::vector<PirEvent> events{event("P1", day(2021, 4, 1), 5, Eye::left, 0.4)};
  FeaturizeOptions opts;
  opts.boundaries = {5, 12, 18};
  const auto rows = build_day_rows(events, FeatureSchema::canonical(), opts);
  EXPECT_FALSE(rows[0].imputed_mask[feature_index(Eye::left, Period::morning, Stat::sum)]);
  EXPECT_TRUE(build_day_rows(events)[0].imputed_mask[feature_index(Eye::left, Period::morning, Stat::sum)]);
}

}  // namespace
}  // namespace moodpupilar::features
