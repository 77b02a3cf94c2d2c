// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moodpupilar/domain.hpp"
#include "moodpupilar/features.hpp"

namespace moodpupilar::labeling {

struct DailyMood {
  DayKey key;
  double valence_mean = 0.0;
  double arousal_mean = 0.0;
  std::size_t n_reports = 0;

  friend bool operator==(const DailyMood&, const DailyMood&) = default;
};

/// Unweighted mean of one participant-day's reports, grouped by local date.
/// Throws Error(NoReports) on empty input and Error(InvalidArgument) when the
/// reports span more than one participant-day.
DailyMood daily_average(std::span<const MoodReport> reports);

/// Groups reports by participant and local date; sorted by key.
std::vector<DailyMood> daily_moods(std::span<const MoodReport> reports);

/// low iff score < 0.
constexpr Label binarize(double score) noexcept { return score < 0.0 ? Label::low : Label::high; }

struct JoinReport {
  std::size_t feature_days = 0;
  std::size_t mood_days = 0;
  std::size_t matched = 0;
};

struct JoinResult {
  std::vector<features::DayFeatureRow> rows;
  JoinReport report;
};

/// Attaches daily mood means and binary labels to rows whose key has a mood
/// entry. Unmatched rows are kept, unlabeled.
JoinResult join_labels(std::vector<features::DayFeatureRow> rows, std::span<const DailyMood> moods);

/// Rows with labels, in input order.
std::vector<features::DayFeatureRow> labeled_rows(std::span<const features::DayFeatureRow> rows);

}  // namespace moodpupilar::labeling
