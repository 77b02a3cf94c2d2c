// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include <fmt/format.h>

#include "moodpupilar/csv.hpp"
#include "moodpupilar/ingest.hpp"
#include "support.hpp"

namespace moodpupilar {
namespace {

using testing::day;

TEST(Csv, SplitRecordHonorsQuotes) {
  EXPECT_EQ(csv::split_record(R"(a,"b,c","d""e",)"), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  EXPECT_EQ(csv::escape_field("x,y"), "\"x,y\"");
  EXPECT_EQ(csv::split_record(csv::join_record({"p\"q", "r,s", "t"})), (std::vector<std::string>{"p\"q", "r,s", "t"}));
}

TEST(Csv, FormatRealRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(parse_double(csv::format_real(v)), v);
  }
}

TEST(Csv, AtomicWriteReplacesContent) {
  const auto dir = testing::temp_dir("atomic");
  const auto path = dir / "f.txt";
  csv::write_file_atomic(path, "one");
  csv::write_file_atomic(path, "two");
  EXPECT_EQ(csv::read_file(path), "two");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()), 1);
  csv::write_file_atomic(dir / "nested" / "g.txt", "three");
  EXPECT_EQ(csv::read_file(dir / "nested" / "g.txt"), "three");
  EXPECT_THROW(csv::write_file_atomic(path / "under_a_file.txt", "x"), Error);
}

TEST(ReadPirCsv, FunnelCountsOutOfRange) {
  const auto r = ingest::parse_pir_csv(
      "participant_id,timestamp,eye,pir\n"
      "P1,2021-04-01T10:00:00Z,L,0.15\n"
      "P1,2021-04-01T10:00:00Z,R,0.3\n"
      "P1,2021-04-01T11:00:00Z,L,0.7\n");
  EXPECT_EQ(r.report.total_events, 3u);
  EXPECT_EQ(r.report.parsed_ok, 3u);
  EXPECT_EQ(r.report.out_of_range, 1u);
  EXPECT_EQ(r.report.usable, 2u);
  EXPECT_EQ(r.report.participant_days, 1u);
  EXPECT_DOUBLE_EQ(r.report.per_participant_daily_mean_events, 2.0);
}

TEST(ReadPirCsv, MissingEyeColumnIsBadHeader) {
  try {
    ingest::parse_pir_csv("participant_id,timestamp,pir\nP1,2021-04-01T10:00:00Z,0.3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadHeader);
    EXPECT_NE(std::string(e.what()).find("eye"), std::string::npos);
  }
}

TEST(ReadPirCsv, EmptyAndMissingFiles) {
  try {
    ingest::parse_pir_csv("# only a comment\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFile);
  }
  try {
    ingest::read_pir_csv("/nonexistent/pir.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/pir.csv"), std::string::npos);
  }
}

TEST(ReadPirCsv, MalformedRowsAreSkippedWithLineNumbers) {
  const auto r = ingest::parse_pir_csv(
      "# provenance\n"
      "participant_id,timestamp,eye,pir\n"
      "P1,2021-04-01T10:00:00Z,L,0.4\n"
      "P1,not-a-time,L,0.4\n"
      "P1,2021-04-01T10:00:00Z,L\n"
      "P1,2021-04-01T10:00:00Z,L,1.2\n");
  EXPECT_EQ(r.events.size(), 1u);
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_EQ(r.diagnostics[0].line, 4u);
  EXPECT_EQ(r.diagnostics[0].code, ErrorCode::BadTimestamp);
  EXPECT_EQ(r.diagnostics[1].line, 5u);
  EXPECT_EQ(r.diagnostics[2].code, ErrorCode::RatioOutOfUnitInterval);
  EXPECT_EQ(r.report.malformed, 3u);
}

TEST(ReadPirCsv, ReportIdentitiesUnderRandomCorruption) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const char* junk[] = {"P1,,L,0.4", "P1,2021-04-01T10:00:00Z,Z,0.4", "P1,2021-04-01T10:00:00Z,L,abc",
                        "P1,2021-04-01T10:00:00Z,L,-0.1", "garbage", ",2021-04-01T10:00:00Z,R,0.5"};
  for (int trial = 0; trial < 100; ++trial) {
    std::string text = "participant_id,timestamp,eye,pir\n";
    std::size_t injected = 0;
    const int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      if (rng() % 4 == 0) {
        text += junk[rng() % std::size(junk)];
        ++injected;
      } else {
        text += fmt::format("P{},2021-04-0{}T{:02d}:00:00Z,{},{}", rng() % 3, 1 + rng() % 5, rng() % 24,
                            rng() % 2 ? "L" : "R", csv::format_real(u(rng)));
      }
      text += '\n';
    }
    const auto r = ingest::parse_pir_csv(text);
    EXPECT_EQ(r.report.total_events, static_cast<std::size_t>(n));
    EXPECT_EQ(r.report.malformed, injected);
    EXPECT_EQ(r.report.parsed_ok + r.report.malformed, r.report.total_events);
    EXPECT_EQ(r.report.usable, r.report.parsed_ok - r.report.out_of_range);
    EXPECT_EQ(r.diagnostics.size(), injected);
  }
}

TEST(ReadMoodCsv, ScoreOutOfRangeRowIsRejected) {
  const auto r = ingest::parse_mood_csv(
      "participant_id,timestamp,valence,arousal\n"
      "P1,2021-04-01T10:00:00Z,5,0\n"
      "P1,2021-04-01T11:00:00Z,-4,4\n");
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].valence, -4.0);
  EXPECT_EQ(r.reports[0].arousal, 4.0);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, ErrorCode::ScoreOutOfRange);
}

TEST(ReadMoodCsv, EmptyBodyWarns) {
  const auto r = ingest::parse_mood_csv("participant_id,timestamp,valence,arousal\n");
  EXPECT_TRUE(r.reports.empty());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ReadMoodCsv, SortedByParticipantThenInstant) {
  const auto r = ingest::parse_mood_csv(
      "participant_id,timestamp,valence,arousal\n"
      "P2,2021-04-01T10:00:00Z,1,1\n"
      "P1,2021-04-01T12:00:00Z,2,2\n"
      "P1,2021-04-01T06:00:00-05:00,3,3\n");
  ASSERT_EQ(r.reports.size(), 3u);
  EXPECT_EQ(r.reports[0].valence, 3.0);
  EXPECT_EQ(r.reports[1].valence, 2.0);
  EXPECT_EQ(r.reports[2].participant_id, "P2");
}

features::DayFeatureRow sample_row(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  features::DayFeatureRow row;
  row.key = {fmt::format("P{:02d}", index % 7), CivilDate{std::chrono::sys_days{day(2021, 4, 1)} +
                                                           std::chrono::days{index}}};
  for (auto& f : row.features) f = u(rng);
  for (auto& m : row.imputed_mask) m = rng() % 2 == 0;
  if (index % 3 != 0) {
    row.valence_mean = u(rng) * 8 - 4;
    row.arousal_mean = u(rng) * 8 - 4;
    row.valence_label = *row.valence_mean < 0 ? Label::low : Label::high;
    row.arousal_label = *row.arousal_mean < 0 ? Label::low : Label::high;
    row.n_reports = 1 + index % 3;
  }
  return row;
}

TEST(FeatureCsv, RoundTripIsLossless) {
  std::mt19937_64 rng(2);
  std::vector<features::DayFeatureRow> rows;
  for (int i = 0; i < 470; ++i) rows.push_back(sample_row(rng, i));
  const auto text = ingest::format_feature_csv(rows, {"seed: 1"});
  std::size_t data_lines = 0;
  for (const auto& line : csv::split_lines(text)) data_lines += !line.empty() && !csv::is_comment(line);
  EXPECT_EQ(data_lines - 1, 470u);
  EXPECT_EQ(ingest::parse_feature_csv(text), rows);
}

TEST(FeatureCsv, ZeroRowsGiveHeaderOnly) {
  const auto text = ingest::format_feature_csv({});
  EXPECT_EQ(text, ingest::feature_header() + "\n");
  EXPECT_TRUE(ingest::parse_feature_csv(text).empty());
}

TEST(FeatureCsv, HeaderLayout) {
  const auto cols = csv::split_record(ingest::feature_header());
  ASSERT_EQ(cols.size(), 2u + 48u + 5u + 48u);
  EXPECT_EQ(cols[0], "participant_id");
  EXPECT_EQ(cols[1], "date");
  EXPECT_EQ(cols[2], "left_midnight_sum");
  EXPECT_EQ(cols[49], "right_evening_std");
  EXPECT_EQ(cols[50], "valence_label");
  EXPECT_EQ(cols[54], "n_reports");
  EXPECT_EQ(cols[55], "imputed_left_midnight_sum");
}

TEST(FeatureCsv, FileRoundTrip) {
  std::mt19937_64 rng(8);
  std::vector<features::DayFeatureRow> rows{sample_row(rng, 1), sample_row(rng, 2)};
  const auto path = testing::temp_dir("featcsv") / "features.csv";
  ingest::write_feature_csv(rows, path);
  EXPECT_EQ(ingest::read_feature_csv(path), rows);
}

TEST(PirCsv, WriteReadRoundTrip) {
  const auto cohort = simgen::generate_cohort(testing::small_cohort(4, 3, 3));
  const auto back = ingest::parse_pir_csv(ingest::format_pir_csv(cohort.events, {"x"}));
  ASSERT_EQ(back.events.size(), cohort.events.size());
  EXPECT_EQ(back.events, cohort.events);
  const auto moods = ingest::parse_mood_csv(ingest::format_mood_csv(cohort.reports));
  EXPECT_EQ(moods.reports.size(), cohort.reports.size());
}

}  // namespace
}  // namespace moodpupilar
