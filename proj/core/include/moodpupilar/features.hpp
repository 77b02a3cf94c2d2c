// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Daily featurization: PIR events are grouped by (participant, local date,
// eye, period) and each group is summarized by six statistics, giving a
// 2 x 4 x 6 = 48 cell vector per participant-day. Empty cells are imputed.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodpupilar/domain.hpp"

namespace moodpupilar::features {

enum class Stat : std::uint8_t { sum = 0, min = 1, max = 2, mean = 3, median = 4, std = 5 };
inline constexpr std::array<Stat, 6> kStats{Stat::sum, Stat::min, Stat::max,
                                            Stat::mean, Stat::median, Stat::std};
std::string_view to_string(Stat stat) noexcept;

inline constexpr std::size_t kNumStats = kStats.size();
inline constexpr std::size_t kCellsPerEye = kPeriods.size() * kNumStats;
inline constexpr std::size_t kNumFeatures = kEyes.size() * kCellsPerEye;
static_assert(kNumFeatures == 48);

/// Eye-major, then period, then statistic.
constexpr std::size_t feature_index(Eye eye, Period period, Stat stat) noexcept {
  return static_cast<std::size_t>(eye) * kCellsPerEye +
         static_cast<std::size_t>(period) * kNumStats + static_cast<std::size_t>(stat);
}

using FeatureVector = std::array<double, kNumFeatures>;
using ImputationMask = std::array<bool, kNumFeatures>;
using CellVector = std::array<std::optional<double>, kNumFeatures>;
using CellCounts = std::array<std::uint32_t, kNumFeatures>;

/// Canonical column names `{eye}_{period}_{stat}` in feature_index order.
class FeatureSchema {
 public:
  static const FeatureSchema& canonical();

  [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
  [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
  [[nodiscard]] std::string_view version() const noexcept { return "moodpupilar.features/1"; }

 private:
  FeatureSchema();
  std::vector<std::string> names_;
};

struct PeriodStats {
  double sum = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double std = 0.0;

  [[nodiscard]] double get(Stat stat) const noexcept;
};

/// Sum, extremes, mean, median (midpoint for even n) and sample standard
/// deviation (0 for a single value). std::nullopt for an empty input.
/// The result does not depend on the order of `values`.
std::optional<PeriodStats> period_stats(std::span<const double> values);

enum class ImputationPolicy : std::uint8_t {
  /// same-day donors of the same eye, then participant history, then cohort
  same_day_first,
  /// participant history, then cohort, then same-day donors
  history_first,
};
std::string_view to_string(ImputationPolicy policy) noexcept;
std::optional<ImputationPolicy> parse_imputation_policy(std::string_view text) noexcept;

struct ImputedCells {
  FeatureVector values{};
  ImputationMask mask{};
};

/// Fills every missing cell. A missing `{eye}_{period}_{stat}` takes the mean
/// of the same eye and statistic over the day's observed periods, then the
/// participant's historical mean for that cell, then the cohort mean. As a last
/// resort it takes the mean of the same statistic over every observed cell of
/// the day, which always exists. Throws Error(AllCellsMissing).
ImputedCells impute_missing(const CellVector& cells, const CellVector& participant_history,
                            const CellVector& cohort_means,
                            ImputationPolicy policy = ImputationPolicy::same_day_first);

struct DayFeatureRow {
  DayKey key;
  FeatureVector features{};
  ImputationMask imputed_mask{};
  std::optional<Label> valence_label;
  std::optional<Label> arousal_label;
  std::optional<double> valence_mean;
  std::optional<double> arousal_mean;
  std::size_t n_reports = 0;

  [[nodiscard]] bool labeled() const noexcept { return n_reports > 0; }

  friend bool operator==(const DayFeatureRow&, const DayFeatureRow&) = default;
};

struct FeaturizeOptions {
  PeriodBoundaries boundaries{};
  ImputationPolicy policy = ImputationPolicy::same_day_first;
};

/// Rows plus the number of events behind every cell (0 for imputed cells).
struct DayBuild {
  std::vector<DayFeatureRow> rows;
  std::vector<CellCounts> cell_counts;
};

/// Events must already be filtered to the PIR range. Days without events
/// produce no row; rows are sorted by (participant_id, date).
DayBuild build_day_rows_detailed(std::span<const PirEvent> events,
                                 const FeatureSchema& schema = FeatureSchema::canonical(),
                                 const FeaturizeOptions& options = {});

std::vector<DayFeatureRow> build_day_rows(std::span<const PirEvent> events,
                                          const FeatureSchema& schema = FeatureSchema::canonical(),
                                          const FeaturizeOptions& options = {});

}  // namespace moodpupilar::features
