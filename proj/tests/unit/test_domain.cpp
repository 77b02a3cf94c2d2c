// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "moodpupilar/domain.hpp"
#include "support.hpp"

namespace moodpupilar {
namespace {

using testing::day;

RawPirEvent raw(const char* pid, const char* ts, const char* eye, const char* pir) {
  auto opt = [](const char* s) { return s ? std::optional<std::string>(s) : std::nullopt; };
  return {opt(pid), opt(ts), opt(eye), opt(pir)};
}

ErrorCode error_of(const Validated<PirEvent>& v) { return std::get<ValidationError>(v).code; }

TEST(Timestamp, ParsesOffsetAndMillis) {
  const auto ts = parse_timestamp("2021-04-03T14:22:05.120-05:00");
  ASSERT_TRUE(ts);
  EXPECT_EQ(ts->date, day(2021, 4, 3));
  EXPECT_EQ(ts->hour, 14);
  EXPECT_EQ(ts->minute, 22);
  EXPECT_EQ(ts->second, 5);
  EXPECT_EQ(ts->millisecond, 120);
  EXPECT_EQ(ts->utc_offset_minutes, -300);
  EXPECT_EQ(ts->to_iso8601(), "2021-04-03T14:22:05.120-05:00");
}

TEST(Timestamp, UtcInstantAccountsForOffset) {
  const auto a = parse_timestamp("2021-04-03T14:00:00-05:00");
  const auto b = parse_timestamp("2021-04-03T19:00:00Z");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->utc_epoch_millis(), b->utc_epoch_millis());
}

TEST(Timestamp, RejectsMalformedText) {
  for (const char* text : {"2021-04-03/14:22:05Z", "2021-04-03T14:22:05", "2021-13-03T14:22:05Z",
                           "2021-02-30T10:00:00Z", "2021-04-03T24:00:00Z", "2021-04-03T14:22:05.1234Z", "",
                           "2021-04-03T14:22:05+25:00"}) {
    EXPECT_FALSE(parse_timestamp(text)) << text;
  }
}

TEST(ValidateEvent, AcceptsInRangeValue) {
  const auto v = validate_event(raw("P1", "2021-04-03T10:00:00Z", "L", "0.45"));
  ASSERT_TRUE(std::holds_alternative<PirEvent>(v));
  const auto& e = std::get<PirEvent>(v);
  EXPECT_EQ(e.pir, 0.45);
  EXPECT_EQ(e.eye, Eye::left);
  EXPECT_FALSE(e.out_of_range);
}

TEST(ValidateEvent, RatioAboveOneIsRejected) {
  EXPECT_EQ(error_of(validate_event(raw("P1", "2021-04-03T10:00:00Z", "L", "1.3"))),
            ErrorCode::RatioOutOfUnitInterval);
}

TEST(ValidateEvent, NanIsNonFinite) {
  EXPECT_EQ(error_of(validate_event(raw("P1", "2021-04-03T10:00:00Z", "R", "NaN"))), ErrorCode::NonFiniteValue);
  EXPECT_EQ(error_of(validate_event(raw("P1", "2021-04-03T10:00:00Z", "R", "inf"))), ErrorCode::NonFiniteValue);
}

TEST(ValidateEvent, NamesTheOffendingField) {
  const auto v = validate_event(raw("P1", nullptr, "L", "0.4"));
  ASSERT_TRUE(std::holds_alternative<ValidationError>(v));
  EXPECT_EQ(std::get<ValidationError>(v).code, ErrorCode::MissingField);
  EXPECT_EQ(std::get<ValidationError>(v).field, "timestamp");
  EXPECT_EQ(error_of(validate_event(raw("P1", "yesterday", "L", "0.4"))), ErrorCode::BadTimestamp);
  EXPECT_EQ(error_of(validate_event(raw("P1", "2021-04-03T10:00:00Z", "X", "0.4"))), ErrorCode::BadEye);
}

TEST(ValidateEvent, OutOfRangeValuesAreKeptWithFlag) {
  const auto v = validate_event(raw("P1", "2021-04-03T10:00:00Z", "L", "0.15"));
  ASSERT_TRUE(std::holds_alternative<PirEvent>(v));
  EXPECT_TRUE(std::get<PirEvent>(v).out_of_range);
}

// Exhaustive over one bad value per field: each error fires exactly when its
// condition holds.
TEST(ValidateEvent, ErrorTaxonomyIsExhaustive) {
  const char* pids[] = {"P1", nullptr};
  const char* stamps[] = {"2021-04-03T10:00:00Z", nullptr, "nope"};
  const char* eyes[] = {"R", nullptr, "Q"};
  const char* pirs[] = {"0.5", nullptr, "nan", "1.5", "0"};
  for (const auto* p : pids) {
    for (const auto* t : stamps) {
      for (const auto* e : eyes) {
        for (const auto* r : pirs) {
          const auto v = validate_event(raw(p, t, e, r));
          const bool missing = !p || !t || !e || !r;
          const bool bad = missing || std::string(t) == "nope" || std::string(e) == "Q" ||
                           std::string(r) != "0.5";
          EXPECT_EQ(std::holds_alternative<PirEvent>(v), !bad);
          if (missing) {
            EXPECT_EQ(error_of(v), ErrorCode::MissingField);
          }
        }
      }
    }
  }
}

TEST(ValidateReport, ScoreOutsideScaleIsRejected) {
  const RawMoodReport bad{"P1", "2021-04-03T10:00:00Z", "5", "0"};
  const auto v = validate_report(bad);
  ASSERT_TRUE(std::holds_alternative<ValidationError>(v));
  EXPECT_EQ(std::get<ValidationError>(v).code, ErrorCode::ScoreOutOfRange);
  const RawMoodReport edge{"P1", "2021-04-03T10:00:00Z", "-4", "4"};
  EXPECT_TRUE(std::holds_alternative<MoodReport>(validate_report(edge)));
}

TEST(PirRange, RejectsInvalidBounds) {
  EXPECT_THROW(PirRange(0.0, 0.7), Error);
  EXPECT_THROW(PirRange(0.5, 0.5), Error);
  EXPECT_THROW(PirRange(0.2, 1.0), Error);
  EXPECT_NO_THROW(PirRange(0.1, 0.9));
}

std::vector<PirEvent> with_values(std::initializer_list<double> values) {
  std::vector<PirEvent> out;
  for (const double v : values) out.push_back(testing::event("P1", day(2021, 4, 1), 10, Eye::left, v));
  return out;
}

std::vector<double> values_of(const std::vector<PirEvent>& events) {
  std::vector<double> out;
  for (const auto& e : events) out.push_back(e.pir);
  return out;
}

TEST(FilterPir, KeepsInRangeValues) {
  const auto r = filter_pir(with_values({0.15, 0.30, 0.72}), PirRange{});
  EXPECT_EQ(values_of(r.kept), (std::vector<double>{0.30}));
  EXPECT_EQ(r.dropped, 2u);
}

TEST(FilterPir, BoundsAreInclusive) {
  EXPECT_EQ(values_of(filter_pir(with_values({0.2, 0.7}), PirRange{}).kept), (std::vector<double>{0.2, 0.7}));
}

TEST(FilterPir, EmptyInput) {
  const auto r = filter_pir({}, PirRange{});
  EXPECT_TRUE(r.kept.empty());
  EXPECT_EQ(r.dropped, 0u);
}

TEST(FilterPir, IdempotentSubsetWithCountIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PirEvent> events;
    const int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) events.push_back(testing::event("P1", day(2021, 4, 1), 10, Eye::right, u(rng), i));
    const auto once = filter_pir(events, PirRange{});
    const auto twice = filter_pir(once.kept, PirRange{});
    EXPECT_EQ(once.kept, twice.kept);
    EXPECT_EQ(twice.dropped, 0u);
    EXPECT_EQ(once.kept.size() + once.dropped, events.size());
    auto it = events.begin();
    for (const auto& kept : once.kept) {
      it = std::find(it, events.end(), kept);
      ASSERT_NE(it, events.end());
      ++it;
    }
  }
}

TEST(AssignPeriod, DefaultBoundaries) {
  const auto d = day(2021, 4, 1);
  EXPECT_EQ(assign_period(testing::at(d, 3)), Period::midnight);
  EXPECT_EQ(assign_period(testing::at(d, 6)), Period::morning);
  EXPECT_EQ(assign_period(testing::at(d, 23, 59)), Period::evening);
  EXPECT_EQ(assign_period(testing::at(d, 12)), Period::afternoon);
  EXPECT_EQ(assign_period(testing::at(d, 18)), Period::evening);
}

TEST(AssignPeriod, TotalOverEveryMillisecondOfTheDay) {
  std::array<std::int64_t, 4> counts{};
  Timestamp ts = testing::at(day(2021, 4, 1), 0);
  Period previous = Period::midnight;
  for (std::int64_t ms = 0; ms < 86'400'000; ++ms) {
    ts.hour = static_cast<int>(ms / 3'600'000);
    ts.minute = static_cast<int>(ms / 60'000 % 60);
    ts.second = static_cast<int>(ms / 1000 % 60);
    ts.millisecond = static_cast<int>(ms % 1000);
    const auto p = assign_period(ts);
    ASSERT_GE(static_cast<int>(p), static_cast<int>(previous));
    previous = p;
    ++counts[static_cast<std::size_t>(p)];
  }
  for (const auto c : counts) EXPECT_EQ(c, 6 * 3'600'000);
}

TEST(AssignPeriod, UsesLocalWallClock) {
  auto ts = parse_timestamp("2021-04-01T05:30:00-07:00");
  ASSERT_TRUE(ts);
  EXPECT_EQ(assign_period(*ts), Period::midnight);
}

TEST(AssignPeriod, ConfigurableBoundaries) {
  PeriodBoundaries b{5, 11, 17};
  EXPECT_EQ(assign_period(testing::at(day(2021, 4, 1), 5), b), Period::morning);
  EXPECT_EQ(assign_period(testing::at(day(2021, 4, 1), 17), b), Period::evening);
  EXPECT_THROW((PeriodBoundaries{12, 6, 18}.validate()), Error);
}

TEST(ParseDouble, StrictWholeField) {
  EXPECT_EQ(parse_double("0.25"), 0.25);
  EXPECT_EQ(parse_double("+1"), 1.0);
  EXPECT_FALSE(parse_double("0.25x"));
  EXPECT_FALSE(parse_double(""));
}

}  // namespace
}  // namespace moodpupilar
