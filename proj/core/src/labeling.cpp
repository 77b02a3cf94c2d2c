// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/labeling.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace moodpupilar::labeling {

DailyMood daily_average(std::span<const MoodReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::NoReports, "no mood reports for the day");
  DailyMood mood;
  mood.key = DayKey{reports.front().participant_id, reports.front().timestamp.date};
  // Sorting makes the floating-point sum independent of report order.
  std::vector<double> valence;
  std::vector<double> arousal;
  valence.reserve(reports.size());
  arousal.reserve(reports.size());
  for (const auto& r : reports) {
    if (r.participant_id != mood.key.participant_id || r.timestamp.date != mood.key.date) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("reports span more than one participant-day ({} {} vs {} {})",
                              mood.key.participant_id, format_date(mood.key.date), r.participant_id,
                              format_date(r.timestamp.date)));
    }
    valence.push_back(r.valence);
    arousal.push_back(r.arousal);
  }
  std::sort(valence.begin(), valence.end());
  std::sort(arousal.begin(), arousal.end());
  double vs = 0.0;
  double as = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    vs += valence[i];
    as += arousal[i];
  }
  const auto n = static_cast<double>(reports.size());
  mood.valence_mean = std::clamp(vs / n, valence.front(), valence.back());
  mood.arousal_mean = std::clamp(as / n, arousal.front(), arousal.back());
  mood.n_reports = reports.size();
  return mood;
}

std::vector<DailyMood> daily_moods(std::span<const MoodReport> reports) {
  std::map<DayKey, std::vector<MoodReport>> grouped;
  for (const auto& r : reports) grouped[DayKey{r.participant_id, r.timestamp.date}].push_back(r);
  std::vector<DailyMood> out;
  out.reserve(grouped.size());
  for (const auto& [key, day] : grouped) out.push_back(daily_average(day));
  return out;
}

JoinResult join_labels(std::vector<features::DayFeatureRow> rows, std::span<const DailyMood> moods) {
  std::map<DayKey, const DailyMood*> by_key;
  for (const auto& m : moods) by_key.emplace(m.key, &m);

  JoinResult result;
  result.report.feature_days = rows.size();
  result.report.mood_days = by_key.size();
  for (auto& row : rows) {
    row.valence_label.reset();
    row.arousal_label.reset();
    row.valence_mean.reset();
    row.arousal_mean.reset();
    row.n_reports = 0;
    const auto it = by_key.find(row.key);
    if (it == by_key.end()) continue;
    const DailyMood& mood = *it->second;
    row.valence_mean = mood.valence_mean;
    row.arousal_mean = mood.arousal_mean;
    row.valence_label = binarize(mood.valence_mean);
    row.arousal_label = binarize(mood.arousal_mean);
    row.n_reports = mood.n_reports;
    ++result.report.matched;
  }
  result.rows = std::move(rows);
  return result;
}

std::vector<features::DayFeatureRow> labeled_rows(std::span<const features::DayFeatureRow> rows) {
  std::vector<features::DayFeatureRow> out;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [](const auto& r) { return r.labeled(); });
  return out;
}

}  // namespace moodpupilar::labeling
