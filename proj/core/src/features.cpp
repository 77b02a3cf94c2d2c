// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace moodpupilar::features {
namespace {

struct RunningMean {
  double sum = 0.0;
  std::size_t n = 0;

  void add(double x) {
    sum += x;
    ++n;
  }
  [[nodiscard]] std::optional<double> value() const {
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  }
};

std::optional<double> same_day_same_eye(const CellVector& cells, Eye eye, Stat stat) {
  RunningMean acc;
  for (const Period p : kPeriods) {
    if (const auto& v = cells[feature_index(eye, p, stat)]) acc.add(*v);
  }
  return acc.value();
}

std::optional<double> same_day_any_eye(const CellVector& cells, Stat stat) {
  RunningMean acc;
  for (const Eye e : kEyes) {
    for (const Period p : kPeriods) {
      if (const auto& v = cells[feature_index(e, p, stat)]) acc.add(*v);
    }
  }
  return acc.value();
}

}  // namespace

std::string_view to_string(Stat stat) noexcept {
  switch (stat) {
    case Stat::sum: return "sum";
    case Stat::min: return "min";
    case Stat::max: return "max";
    case Stat::mean: return "mean";
    case Stat::median: return "median";
    case Stat::std: return "std";
  }
  return "unknown";
}

FeatureSchema::FeatureSchema() {
  names_.reserve(kNumFeatures);
  for (const Eye e : kEyes) {
    for (const Period p : kPeriods) {
      for (const Stat s : kStats) {
        names_.push_back(fmt::format("{}_{}_{}", to_string(e), to_string(p), to_string(s)));
      }
    }
  }
}

const FeatureSchema& FeatureSchema::canonical() {
  static const FeatureSchema schema;
  return schema;
}

double PeriodStats::get(Stat stat) const noexcept {
  switch (stat) {
    case Stat::sum: return sum;
    case Stat::min: return min;
    case Stat::max: return max;
    case Stat::mean: return mean;
    case Stat::median: return median;
    case Stat::std: return std;
  }
  return 0.0;
}

std::optional<PeriodStats> period_stats(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  PeriodStats s;
  for (const double v : sorted) s.sum += v;
  s.min = sorted.front();
  s.max = sorted.back();
  s.mean = s.sum / static_cast<double>(n);
  s.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  // Rounding can push the mean a hair outside [min, max] for near-constant input.
  s.mean = std::clamp(s.mean, s.min, s.max);
  if (n > 1) {
    double ss = 0.0;
    for (const double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return s;
}

std::string_view to_string(ImputationPolicy policy) noexcept {
  return policy == ImputationPolicy::same_day_first ? "same_day_first" : "history_first";
}

std::optional<ImputationPolicy> parse_imputation_policy(std::string_view text) noexcept {
  if (text == "same_day_first") return ImputationPolicy::same_day_first;
  if (text == "history_first") return ImputationPolicy::history_first;
  return std::nullopt;
}

ImputedCells impute_missing(const CellVector& cells, const CellVector& participant_history,
                            const CellVector& cohort_means, ImputationPolicy policy) {
  if (std::none_of(cells.begin(), cells.end(), [](const auto& c) { return c.has_value(); })) {
    throw Error(ErrorCode::AllCellsMissing, "cannot impute a day with no observed cells");
  }
  ImputedCells out;
  for (const Eye e : kEyes) {
    for (const Period p : kPeriods) {
      for (const Stat s : kStats) {
        const std::size_t i = feature_index(e, p, s);
        if (cells[i]) {
          out.values[i] = *cells[i];
          out.mask[i] = false;
          continue;
        }
        std::optional<double> v;
        if (policy == ImputationPolicy::same_day_first) {
          v = same_day_same_eye(cells, e, s);
          if (!v) v = participant_history[i];
          if (!v) v = cohort_means[i];
        } else {
          v = participant_history[i];
          if (!v) v = cohort_means[i];
          if (!v) v = same_day_same_eye(cells, e, s);
        }
        if (!v) v = same_day_any_eye(cells, s);
        out.values[i] = *v;
        out.mask[i] = true;
      }
    }
  }
  return out;
}

DayBuild build_day_rows_detailed(std::span<const PirEvent> events, const FeatureSchema& schema,
                                 const FeaturizeOptions& options) {
  if (schema.size() != kNumFeatures) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("feature schema has {} columns, expected {}", schema.size(), kNumFeatures));
  }
  options.boundaries.validate();

  // (participant, date) -> per-cell-group PIR values; cell groups are eye x period.
  constexpr std::size_t kGroups = kEyes.size() * kPeriods.size();
  std::map<DayKey, std::array<std::vector<double>, kGroups>> grouped;
  for (const auto& event : events) {
    DayKey key{event.participant_id, event.timestamp.date};
    const Period period = assign_period(event.timestamp, options.boundaries);
    const std::size_t group = static_cast<std::size_t>(event.eye) * kPeriods.size() +
                              static_cast<std::size_t>(period);
    grouped[std::move(key)][group].push_back(event.pir);
  }

  struct RawDay {
    DayKey key;
    CellVector cells;
    CellCounts counts{};
  };
  std::vector<RawDay> days;
  days.reserve(grouped.size());
  for (const auto& [key, groups] : grouped) {
    RawDay day{key, {}, {}};
    bool any = false;
    for (const Eye e : kEyes) {
      for (const Period p : kPeriods) {
        const auto& values = groups[static_cast<std::size_t>(e) * kPeriods.size() + static_cast<std::size_t>(p)];
        const auto stats = period_stats(values);
        if (!stats) continue;
        any = true;
        for (const Stat s : kStats) {
          const std::size_t i = feature_index(e, p, s);
          day.cells[i] = stats->get(s);
          day.counts[i] = static_cast<std::uint32_t>(values.size());
        }
      }
    }
    if (any) days.push_back(std::move(day));
  }

  // Historical means per participant and for the whole cohort, over observed cells only.
  std::map<ParticipantId, std::array<RunningMean, kNumFeatures>> history_acc;
  std::array<RunningMean, kNumFeatures> cohort_acc{};
  for (const auto& day : days) {
    auto& hist = history_acc[day.key.participant_id];
    for (std::size_t i = 0; i < kNumFeatures; ++i) {
      if (day.cells[i]) {
        hist[i].add(*day.cells[i]);
        cohort_acc[i].add(*day.cells[i]);
      }
    }
  }
  CellVector cohort_means;
  for (std::size_t i = 0; i < kNumFeatures; ++i) cohort_means[i] = cohort_acc[i].value();
  std::map<ParticipantId, CellVector> history_means;
  for (const auto& [pid, acc] : history_acc) {
    auto& means = history_means[pid];
    for (std::size_t i = 0; i < kNumFeatures; ++i) means[i] = acc[i].value();
  }

  DayBuild build;
  build.rows.reserve(days.size());
  build.cell_counts.reserve(days.size());
  for (auto& day : days) {
    const auto imputed =
        impute_missing(day.cells, history_means.at(day.key.participant_id), cohort_means, options.policy);
    DayFeatureRow row;
    row.key = std::move(day.key);
    row.features = imputed.values;
    row.imputed_mask = imputed.mask;
    build.rows.push_back(std::move(row));
    build.cell_counts.push_back(day.counts);
  }
  return build;
}

std::vector<DayFeatureRow> build_day_rows(std::span<const PirEvent> events, const FeatureSchema& schema,
                                          const FeaturizeOptions& options) {
  return build_day_rows_detailed(events, schema, options).rows;
}

}  // namespace moodpupilar::features
