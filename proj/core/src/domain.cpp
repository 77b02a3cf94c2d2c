// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/domain.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace moodpupilar {
namespace {

constexpr std::int64_t kMillisPerDay = 86'400'000;

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

std::optional<std::string> trimmed_or_null(const std::optional<std::string>& field) {
  if (!field) return std::nullopt;
  const auto first = field->find_first_not_of(" \t\r");
  if (first == std::string::npos) return std::nullopt;
  const auto last = field->find_last_not_of(" \t\r");
  return field->substr(first, last - first + 1);
}

ValidationError missing(std::string_view field) {
  return {ErrorCode::MissingField, std::string(field), fmt::format("field '{}' is missing", field)};
}

}  // namespace

std::string format_date(CivilDate date) {
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                     static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

std::optional<CivilDate> parse_date(std::string_view text) {
  int y = 0;
  int m = 0;
  int d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!parse_fixed_int(text, 0, 4, y) || !parse_fixed_int(text, 5, 2, m) ||
      !parse_fixed_int(text, 8, 2, d)) {
    return std::nullopt;
  }
  const CivilDate date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                       std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::int64_t Timestamp::millis_of_day() const noexcept {
  return ((static_cast<std::int64_t>(hour) * 60 + minute) * 60 + second) * 1000 + millisecond;
}

std::int64_t Timestamp::utc_epoch_millis() const noexcept {
  const auto days = std::chrono::sys_days{date}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * kMillisPerDay + millis_of_day() -
         static_cast<std::int64_t>(utc_offset_minutes) * 60'000;
}

std::string Timestamp::to_iso8601() const {
  const int abs_offset = std::abs(utc_offset_minutes);
  return fmt::format("{}T{:02d}:{:02d}:{:02d}.{:03d}{}{:02d}:{:02d}", format_date(date), hour, minute,
                     second, millisecond, utc_offset_minutes < 0 ? '-' : '+', abs_offset / 60,
                     abs_offset % 60);
}

// Accepts YYYY-MM-DDTHH:MM:SS[.fff][Z|(+|-)HH:MM]. Fractions shorter than
// three digits are scaled; longer fractions are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text) {
  if (text.size() < 20 || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  Timestamp ts;
  auto date = parse_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  ts.date = *date;
  if (text[13] != ':' || text[16] != ':') return std::nullopt;
  if (!parse_fixed_int(text, 11, 2, ts.hour) || !parse_fixed_int(text, 14, 2, ts.minute) ||
      !parse_fixed_int(text, 17, 2, ts.second)) {
    return std::nullopt;
  }
  if (ts.hour > 23 || ts.minute > 59 || ts.second > 59) return std::nullopt;

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    int frac = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      frac = frac * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0 || digits > 3) return std::nullopt;
    for (std::size_t i = digits; i < 3; ++i) frac *= 10;
    ts.millisecond = frac;
  }
  if (pos >= text.size()) return std::nullopt;  // offset is mandatory
  if (text[pos] == 'Z') {
    ts.utc_offset_minutes = 0;
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '-' ? -1 : 1;
    int oh = 0;
    int om = 0;
    if (pos + 6 != text.size() || text[pos + 3] != ':' || !parse_fixed_int(text, pos + 1, 2, oh) ||
        !parse_fixed_int(text, pos + 4, 2, om) || oh > 14 || om > 59) {
      return std::nullopt;
    }
    ts.utc_offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != text.size()) return std::nullopt;
  return ts;
}

std::string_view to_string(Eye eye) noexcept { return eye == Eye::left ? "left" : "right"; }

std::string_view to_token(Eye eye) noexcept { return eye == Eye::left ? "L" : "R"; }

std::optional<Eye> parse_eye_token(std::string_view token) noexcept {
  if (token == "L") return Eye::left;
  if (token == "R") return Eye::right;
  return std::nullopt;
}

std::string_view to_string(Period period) noexcept {
  switch (period) {
    case Period::midnight: return "midnight";
    case Period::morning: return "morning";
    case Period::afternoon: return "afternoon";
    case Period::evening: return "evening";
  }
  return "unknown";
}

void PeriodBoundaries::validate() const {
  if (!(0 < morning_start && morning_start < afternoon_start && afternoon_start < evening_start &&
        evening_start < 24)) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("period boundaries must satisfy 0 < {} < {} < {} < 24", morning_start,
                            afternoon_start, evening_start));
  }
}

Period assign_period(const Timestamp& ts, const PeriodBoundaries& boundaries) {
  constexpr std::int64_t kMillisPerHour = 3'600'000;
  const std::int64_t t = ts.millis_of_day();
  if (t < boundaries.morning_start * kMillisPerHour) return Period::midnight;
  if (t < boundaries.afternoon_start * kMillisPerHour) return Period::morning;
  if (t < boundaries.evening_start * kMillisPerHour) return Period::afternoon;
  return Period::evening;
}

PirRange::PirRange(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && 0.0 < lo && lo < hi && hi < 1.0)) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("PIR range must satisfy 0 < lo < hi < 1, got [{}, {}]", lo, hi));
  }
}

std::optional<double> parse_double(std::string_view text) noexcept {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

Validated<PirEvent> validate_event(const RawPirEvent& raw, const PirRange& range) {
  const auto participant = trimmed_or_null(raw.participant_id);
  const auto timestamp = trimmed_or_null(raw.timestamp);
  const auto eye = trimmed_or_null(raw.eye);
  const auto pir = trimmed_or_null(raw.pir);
  if (!participant) return missing("participant_id");
  if (!timestamp) return missing("timestamp");
  if (!eye) return missing("eye");
  if (!pir) return missing("pir");

  PirEvent event;
  event.participant_id = *participant;
  auto ts = parse_timestamp(*timestamp);
  if (!ts) {
    return ValidationError{ErrorCode::BadTimestamp, "timestamp",
                           fmt::format("cannot parse timestamp '{}'", *timestamp)};
  }
  event.timestamp = *ts;
  auto side = parse_eye_token(*eye);
  if (!side) {
    return ValidationError{ErrorCode::BadEye, "eye",
                           fmt::format("eye must be L or R, got '{}'", *eye)};
  }
  event.eye = *side;
  auto value = parse_double(*pir);
  if (!value || !std::isfinite(*value)) {
    return ValidationError{ErrorCode::NonFiniteValue, "pir",
                           fmt::format("pir '{}' is not a finite number", *pir)};
  }
  if (!(*value > 0.0 && *value < 1.0)) {
    return ValidationError{ErrorCode::RatioOutOfUnitInterval, "pir",
                           fmt::format("pir {} is outside (0, 1)", *value)};
  }
  event.pir = *value;
  event.out_of_range = !range.contains(*value);
  return event;
}

Validated<MoodReport> validate_report(const RawMoodReport& raw) {
  const auto participant = trimmed_or_null(raw.participant_id);
  const auto timestamp = trimmed_or_null(raw.timestamp);
  const auto valence = trimmed_or_null(raw.valence);
  const auto arousal = trimmed_or_null(raw.arousal);
  if (!participant) return missing("participant_id");
  if (!timestamp) return missing("timestamp");
  if (!valence) return missing("valence");
  if (!arousal) return missing("arousal");

  MoodReport report;
  report.participant_id = *participant;
  auto ts = parse_timestamp(*timestamp);
  if (!ts) {
    return ValidationError{ErrorCode::BadTimestamp, "timestamp",
                           fmt::format("cannot parse timestamp '{}'", *timestamp)};
  }
  report.timestamp = *ts;

  const std::pair<const std::string*, double*> scores[] = {{&*valence, &report.valence},
                                                           {&*arousal, &report.arousal}};
  const char* names[] = {"valence", "arousal"};
  for (std::size_t i = 0; i < 2; ++i) {
    auto value = parse_double(*scores[i].first);
    if (!value || !std::isfinite(*value)) {
      return ValidationError{ErrorCode::NonFiniteValue, names[i],
                             fmt::format("{} '{}' is not a finite number", names[i], *scores[i].first)};
    }
    if (*value < kMoodScoreMin || *value > kMoodScoreMax) {
      return ValidationError{ErrorCode::ScoreOutOfRange, names[i],
                             fmt::format("{} {} is outside [-4, 4]", names[i], *value)};
    }
    *scores[i].second = *value;
  }
  return report;
}

FilterResult filter_pir(std::span<const PirEvent> events, const PirRange& range) {
  FilterResult result;
  result.kept.reserve(events.size());
  for (const auto& event : events) {
    if (range.contains(event.pir)) {
      result.kept.push_back(event);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

}  // namespace moodpupilar
