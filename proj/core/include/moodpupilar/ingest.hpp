// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Readers and writers for the pipeline's flat CSV files:
//
//   pir_events.csv    participant_id,timestamp,eye,pir
//   mood_reports.csv  participant_id,timestamp,valence,arousal
//   features.csv      participant_id,date,<48 features>,valence_label,arousal_label,
//                     valence_mean,arousal_mean,n_reports,<48 imputed_ masks>
//
// Leading '#' lines are provenance comments. Malformed data rows are skipped
// and reported with their 1-based line number.

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodpupilar/domain.hpp"
#include "moodpupilar/features.hpp"

namespace moodpupilar::ingest {

inline constexpr std::string_view kPirHeader = "participant_id,timestamp,eye,pir";
inline constexpr std::string_view kMoodHeader = "participant_id,timestamp,valence,arousal";

struct Diagnostic {
  std::size_t line = 0;
  ErrorCode code = ErrorCode::ParseError;
  std::string message;
};

/// Event funnel for one PIR file. `per_participant_daily_mean_events` counts
/// capture instances (distinct participant + timestamp, both eyes together)
/// per observed participant-day.
struct IngestReport {
  std::size_t total_events = 0;
  std::size_t parsed_ok = 0;
  std::size_t malformed = 0;
  std::size_t out_of_range = 0;
  std::size_t usable = 0;
  std::size_t participants = 0;
  std::size_t participant_days = 0;
  double per_participant_daily_mean_events = 0.0;
};

struct PirReadResult {
  std::vector<PirEvent> events;
  IngestReport report;
  std::vector<Diagnostic> diagnostics;
};

struct MoodReadResult {
  std::vector<MoodReport> reports;
  std::size_t total_rows = 0;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> warnings;
};

/// Funnel counts over already validated events.
IngestReport summarize_events(std::span<const PirEvent> events);

PirReadResult parse_pir_csv(std::string_view content, const PirRange& range = {});
PirReadResult read_pir_csv(const std::filesystem::path& path, const PirRange& range = {});

/// Reports come back sorted by participant, then UTC instant.
MoodReadResult parse_mood_csv(std::string_view content);
MoodReadResult read_mood_csv(const std::filesystem::path& path);

std::string format_pir_csv(std::span<const PirEvent> events, const std::vector<std::string>& comments = {});
void write_pir_csv(std::span<const PirEvent> events, const std::filesystem::path& path,
                   const std::vector<std::string>& comments = {});

std::string format_mood_csv(std::span<const MoodReport> reports,
                            const std::vector<std::string>& comments = {});
void write_mood_csv(std::span<const MoodReport> reports, const std::filesystem::path& path,
                    const std::vector<std::string>& comments = {});

std::string feature_header();
std::string format_feature_csv(std::span<const features::DayFeatureRow> rows,
                               const std::vector<std::string>& comments = {});
void write_feature_csv(std::span<const features::DayFeatureRow> rows, const std::filesystem::path& path,
                       const std::vector<std::string>& comments = {});

/// Feature files are produced by this library, so any malformed row is an
/// error (Error(ParseError)) rather than a diagnostic.
std::vector<features::DayFeatureRow> parse_feature_csv(std::string_view content);
std::vector<features::DayFeatureRow> read_feature_csv(const std::filesystem::path& path);

}  // namespace moodpupilar::ingest
