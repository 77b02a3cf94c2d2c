// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Core value types shared by every stage of the pipeline: PIR events, mood
// reports, participant-day keys, the plausibility range and the daily period
// segmentation.

#pragma once

#include <array>
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "moodpupilar/error.hpp"

namespace moodpupilar {

using ParticipantId = std::string;
using CivilDate = std::chrono::year_month_day;

std::string format_date(CivilDate date);
std::optional<CivilDate> parse_date(std::string_view text);

/// Local civil datetime with millisecond precision and the UTC offset that
/// was in force when it was recorded.
struct Timestamp {
  CivilDate date{};
  int hour = 0;
  int minute = 0;
  int second = 0;
  int millisecond = 0;
  int utc_offset_minutes = 0;

  /// Milliseconds since local midnight, in [0, 86'400'000).
  [[nodiscard]] std::int64_t millis_of_day() const noexcept;
  /// Milliseconds since the Unix epoch in UTC.
  [[nodiscard]] std::int64_t utc_epoch_millis() const noexcept;
  /// ISO-8601 with offset, e.g. 2021-04-03T14:22:05.120-05:00.
  [[nodiscard]] std::string to_iso8601() const;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// `YYYY-MM-DDThh:mm:ss[.fff](Z|+hh:mm|-hh:mm)`; a space may replace the `T`.
std::optional<Timestamp> parse_timestamp(std::string_view text);

enum class Eye : std::uint8_t { left = 0, right = 1 };
inline constexpr std::array<Eye, 2> kEyes{Eye::left, Eye::right};
std::string_view to_string(Eye eye) noexcept;
/// CSV token: "L" or "R".
std::string_view to_token(Eye eye) noexcept;
std::optional<Eye> parse_eye_token(std::string_view token) noexcept;

enum class Period : std::uint8_t { midnight = 0, morning = 1, afternoon = 2, evening = 3 };
inline constexpr std::array<Period, 4> kPeriods{Period::midnight, Period::morning,
                                                Period::afternoon, Period::evening};
std::string_view to_string(Period period) noexcept;

/// Start hours of the morning, afternoon and evening periods. Midnight always
/// starts at 00:00.
struct PeriodBoundaries {
  int morning_start = 6;
  int afternoon_start = 12;
  int evening_start = 18;

  void validate() const;
};

Period assign_period(const Timestamp& ts, const PeriodBoundaries& boundaries = {});

/// Physiologically plausible PIR window. Both bounds are inclusive.
class PirRange {
 public:
  PirRange() = default;
  PirRange(double lo, double hi);

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] bool contains(double pir) const noexcept { return pir >= lo_ && pir <= hi_; }

  friend bool operator==(const PirRange&, const PirRange&) = default;

 private:
  double lo_ = 0.2;
  double hi_ = 0.7;
};

struct PirEvent {
  ParticipantId participant_id;
  Timestamp timestamp;
  Eye eye = Eye::left;
  double pir = 0.0;
  bool out_of_range = false;

  friend bool operator==(const PirEvent&, const PirEvent&) = default;
};

struct MoodReport {
  ParticipantId participant_id;
  Timestamp timestamp;
  double valence = 0.0;
  double arousal = 0.0;

  friend bool operator==(const MoodReport&, const MoodReport&) = default;
};

struct DayKey {
  ParticipantId participant_id;
  CivilDate date{};

  friend auto operator<=>(const DayKey&, const DayKey&) = default;
  friend bool operator==(const DayKey&, const DayKey&) = default;
};

/// Binary mood class: scores below zero are low, zero and above are high.
enum class Label : std::uint8_t { low = 0, high = 1 };

inline constexpr double kMoodScoreMin = -4.0;
inline constexpr double kMoodScoreMax = 4.0;

/// A field-level validation failure. `field` names the offending column.
struct ValidationError {
  ErrorCode code;
  std::string field;
  std::string message;
};

template <class T>
using Validated = std::variant<T, ValidationError>;

/// Unparsed event fields as they come off a CSV row; std::nullopt means the
/// field was absent or empty.
struct RawPirEvent {
  std::optional<std::string> participant_id;
  std::optional<std::string> timestamp;
  std::optional<std::string> eye;
  std::optional<std::string> pir;
};

struct RawMoodReport {
  std::optional<std::string> participant_id;
  std::optional<std::string> timestamp;
  std::optional<std::string> valence;
  std::optional<std::string> arousal;
};

Validated<PirEvent> validate_event(const RawPirEvent& raw, const PirRange& range = {});
Validated<MoodReport> validate_report(const RawMoodReport& raw);

struct FilterResult {
  std::vector<PirEvent> kept;
  std::size_t dropped = 0;
};

/// Keeps events with lo <= pir <= hi in input order.
FilterResult filter_pir(std::span<const PirEvent> events, const PirRange& range);

/// Strict decimal parse of a whole field; std::nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view text) noexcept;

}  // namespace moodpupilar
