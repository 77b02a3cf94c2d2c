// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the test binaries.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "moodpupilar/domain.hpp"
#include "moodpupilar/features.hpp"
#include "moodpupilar/labeling.hpp"
#include "moodpupilar/matrix.hpp"
#include "moodpupilar/simgen.hpp"

namespace moodpupilar::testing {

inline CivilDate day(int y, unsigned m, unsigned d) {
  return CivilDate{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline Timestamp at(CivilDate date, int hour, int minute = 0, int offset = 0) {
  Timestamp ts;
  ts.date = date;
  ts.hour = hour;
  ts.minute = minute;
  ts.utc_offset_minutes = offset;
  return ts;
}

inline PirEvent event(const std::string& pid, CivilDate date, int hour, Eye eye, double pir, int minute = 0) {
  return {pid, at(date, hour, minute), eye, pir, false};
}

/// Features plus labels for a simulated cohort, as the CLI builds them.
inline std::vector<features::DayFeatureRow> cohort_rows(const simgen::CohortConfig& config) {
  const auto cohort = simgen::generate_cohort(config);
  const auto kept = filter_pir(cohort.events, PirRange{}).kept;
  auto rows = features::build_day_rows(kept);
  return labeling::join_labels(std::move(rows), labeling::daily_moods(cohort.reports)).rows;
}

inline simgen::CohortConfig small_cohort(std::uint64_t seed, int participants = 8, int days = 10) {
  simgen::CohortConfig c;
  c.n_participants = participants;
  c.n_days = days;
  c.effect_beta = 0.05;
  c.noise_sd = 0.02;
  c.seed = seed;
  return c;
}

inline learn::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  learn::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = n(rng);
  }
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("moodpupilar_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace moodpupilar::testing
