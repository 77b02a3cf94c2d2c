// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "moodpupilar/error.hpp"
#include "moodpupilar/labeling.hpp"
#include "support.hpp"

namespace moodpupilar::labeling {
namespace {

using testing::at;
using testing::day;

MoodReport report(const std::string& pid, CivilDate d, int hour, double valence, double arousal) {
  return {pid, at(d, hour), valence, arousal};
}

features::DayFeatureRow row(const std::string& pid, CivilDate d) {
  features::DayFeatureRow r;
  r.key = {pid, d};
  return r;
}

TEST(DailyAverage, MeanOfThree) {
  const auto d = day(2021, 4, 1);
  const std::vector<MoodReport> reports{report("P1", d, 8, 2, 0), report("P1", d, 12, -1, 0),
                                        report("P1", d, 20, -3, 0)};
  const auto mood = daily_average(reports);
  EXPECT_NEAR(mood.valence_mean, -2.0 / 3.0, 1e-15);
  EXPECT_EQ(mood.n_reports, 3u);
  EXPECT_EQ(binarize(mood.valence_mean), Label::low);
}

TEST(DailyAverage, SingleReportIsIdentity) {
  const std::vector<MoodReport> reports{report("P1", day(2021, 4, 1), 8, 1, -2)};
  const auto mood = daily_average(reports);
  EXPECT_EQ(mood.valence_mean, 1.0);
  EXPECT_EQ(mood.arousal_mean, -2.0);
}

TEST(DailyAverage, Errors) {
  try {
    daily_average({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoReports);
  }
  const std::vector<MoodReport> two_days{report("P1", day(2021, 4, 1), 8, 1, 1),
                                         report("P1", day(2021, 4, 2), 8, 1, 1)};
  EXPECT_THROW(daily_average(two_days), Error);
}

TEST(DailyAverage, OrderInvariantAndBounded) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MoodReport> reports;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) {
      reports.push_back(report("P1", day(2021, 4, 1), i, u(rng), u(rng)));
    }
    const auto mood = daily_average(reports);
    const auto [lo, hi] = std::minmax_element(reports.begin(), reports.end(),
                                              [](const auto& a, const auto& b) { return a.valence < b.valence; });
    EXPECT_GE(mood.valence_mean, lo->valence);
    EXPECT_LE(mood.valence_mean, hi->valence);
    std::reverse(reports.begin(), reports.end());
    EXPECT_NEAR(daily_average(reports).valence_mean, mood.valence_mean, 1e-15);
  }
}

TEST(DailyMoods, GroupsByLocalDate) {
  const std::vector<MoodReport> reports{report("P2", day(2021, 4, 1), 9, 1, 1), report("P1", day(2021, 4, 2), 9, -1, 1),
                                        report("P1", day(2021, 4, 1), 9, 3, 1), report("P1", day(2021, 4, 1), 22, 1, 1)};
  const auto moods = daily_moods(reports);
  ASSERT_EQ(moods.size(), 3u);
  EXPECT_EQ(moods[0].key, (DayKey{"P1", day(2021, 4, 1)}));
  EXPECT_EQ(moods[0].valence_mean, 2.0);
  EXPECT_EQ(moods[0].n_reports, 2u);
  EXPECT_EQ(moods[2].key.participant_id, "P2");
}

TEST(Binarize, Threshold) {
  EXPECT_EQ(binarize(-0.5), Label::low);
  EXPECT_EQ(binarize(0.0), Label::high);
  EXPECT_EQ(binarize(4.0), Label::high);
  EXPECT_EQ(binarize(-4.0), Label::low);
  EXPECT_EQ(binarize(-1e-300), Label::low);
}

TEST(Binarize, Monotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 10000; ++i) {
    auto a = u(rng);
    auto b = u(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(binarize(a), binarize(b));
  }
}

TEST(JoinLabels, CountsMatchThePaperFunnel) {
  std::vector<features::DayFeatureRow> rows;
  std::vector<DailyMood> moods;
  const auto key_day = [](int i) { return CivilDate{std::chrono::sys_days{day(2021, 1, 1)} + std::chrono::days{i}}; };
  for (int i = 0; i < 528; ++i) rows.push_back(row("P1", key_day(i)));
  for (int i = 58; i < 58 + 577; ++i) moods.push_back({{"P1", key_day(i)}, i % 2 ? 1.0 : -1.0, 0.5, 3});
  const auto result = join_labels(rows, moods);
  EXPECT_EQ(result.report.feature_days, 528u);
  EXPECT_EQ(result.report.mood_days, 577u);
  EXPECT_EQ(result.report.matched, 470u);
  EXPECT_EQ(result.rows.size(), 528u);
  EXPECT_EQ(labeled_rows(result.rows).size(), 470u);
}

TEST(JoinLabels, AttachesMeansAndLabels) {
  const std::vector<features::DayFeatureRow> rows{row("P1", day(2021, 4, 1)), row("P1", day(2021, 4, 2))};
  const std::vector<DailyMood> moods{{{"P1", day(2021, 4, 2)}, -0.25, 0.0, 2}};
  const auto result = join_labels(rows, moods);
  EXPECT_FALSE(result.rows[0].labeled());
  EXPECT_FALSE(result.rows[0].valence_label);
  const auto& r = result.rows[1];
  EXPECT_EQ(r.valence_label, Label::low);
  EXPECT_EQ(r.arousal_label, Label::high);
  EXPECT_EQ(r.valence_mean, -0.25);
  EXPECT_EQ(r.n_reports, 2u);
}

TEST(JoinLabels, DisjointAndIdenticalKeys) {
  const std::vector<features::DayFeatureRow> rows{row("P1", day(2021, 4, 1)), row("P2", day(2021, 4, 1))};
  const std::vector<DailyMood> other{{{"P3", day(2021, 4, 1)}, 1, 1, 1}};
  EXPECT_EQ(join_labels(rows, other).report.matched, 0u);
  EXPECT_TRUE(labeled_rows(join_labels(rows, other).rows).empty());
  const std::vector<DailyMood> same{{{"P1", day(2021, 4, 1)}, 1, 1, 1}, {{"P2", day(2021, 4, 1)}, 1, 1, 1}};
  const auto result = join_labels(rows, same);
  EXPECT_EQ(result.report.matched, 2u);
  EXPECT_EQ(labeled_rows(result.rows).size(), 2u);
}

TEST(JoinLabels, MatchedBoundedByBothSides) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<features::DayFeatureRow> rows;
    std::vector<DailyMood> moods;
    for (unsigned d = 1; d <= 20; ++d) {
      if (rng() % 2) rows.push_back(row("P1", day(2021, 4, d)));
      if (rng() % 2) moods.push_back({{"P1", day(2021, 4, d)}, 0.5, 0.5, 1});
    }
    const auto report = join_labels(rows, moods).report;
    EXPECT_LE(report.matched, std::min(rows.size(), moods.size()));
  }
}

}  // namespace
}  // namespace moodpupilar::labeling
