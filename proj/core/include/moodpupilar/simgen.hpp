// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Synthetic cohort generator with a plantable linear PIR/mood coupling.
//
// Each participant gets a baseline PIR, a diurnal phase, a UTC offset and a
// propensity for high valence and for high arousal. Each day draws a latent
// (valence, arousal) pair whose signs follow those propensities and whose
// magnitudes are uniform in [1, 4]. Sessions yield one left and one right
// event with
//
//   pir = clamp(baseline + A sin(2 pi h / 24 + phase) + b_v v + b_a a + noise, 0.05, 0.95)
//
// and mood reports equal the latent pair plus report noise, clamped to [-4, 4].

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "moodpupilar/domain.hpp"

namespace moodpupilar::simgen {

struct CohortConfig {
  int n_participants = 25;
  int n_days = 28;
  double sessions_per_day_mean = 11.85;
  int reports_per_day = 3;
  double effect_beta = 0.02;
  double arousal_beta = 0.01;
  double baseline_pir_mean = 0.45;
  double baseline_pir_sd = 0.05;
  double diurnal_amplitude = 0.03;
  double noise_sd = 0.04;
  double missing_day_prob = 0.09;
  /// Standard deviation of report scores around the latent pair.
  double report_noise_sd = 0.5;
  /// Fraction of sessions placed in 00:00-06:00; the rest fall in 07:00-24:00.
  double night_session_fraction = 0.1;
  CivilDate start_date{std::chrono::year{2021}, std::chrono::month{4}, std::chrono::day{1}};
  std::uint64_t seed = 0;

  /// Throws Error(InvalidConfig).
  void validate() const;

  friend bool operator==(const CohortConfig&, const CohortConfig&) = default;
};

inline constexpr double kPirClampLo = 0.05;
inline constexpr double kPirClampHi = 0.95;

struct TruthLabel {
  DayKey key;
  Label valence_label = Label::low;
  Label arousal_label = Label::low;
  double valence_latent = 0.0;
  double arousal_latent = 0.0;

  friend bool operator==(const TruthLabel&, const TruthLabel&) = default;
};

struct Cohort {
  std::vector<PirEvent> events;
  std::vector<MoodReport> reports;
  /// One entry per emitted (non-missing) participant-day.
  std::vector<TruthLabel> truth;
  /// Participant-days before missingness.
  std::size_t scheduled_days = 0;
};

/// Deterministic for a given config (including seed).
Cohort generate_cohort(const CohortConfig& config);

inline constexpr const char* kTruthHeader =
    "participant_id,date,valence_label,arousal_label,valence_latent,arousal_latent";

std::string format_truth_csv(std::span<const TruthLabel> truth, const std::vector<std::string>& comments = {});
void write_truth_csv(std::span<const TruthLabel> truth, const std::filesystem::path& path,
                     const std::vector<std::string>& comments = {});
/// Throws Error(ParseError), Error(BadHeader), Error(EmptyFile).
std::vector<TruthLabel> parse_truth_csv(std::string_view content);

struct FunnelReport {
  std::size_t generated = 0;
  std::size_t usable = 0;
  std::size_t out_of_range = 0;
  double out_of_range_fraction = 0.0;

  friend bool operator==(const FunnelReport&, const FunnelReport&) = default;
};

FunnelReport funnel_check(std::span<const PirEvent> events, const PirRange& range);

}  // namespace moodpupilar::simgen
