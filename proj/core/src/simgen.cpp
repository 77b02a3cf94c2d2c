// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/simgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <fmt/format.h>

#include "moodpupilar/csv.hpp"
#include "moodpupilar/error.hpp"

namespace moodpupilar::simgen {
namespace {

constexpr std::array kUtcOffsets{-420, -360, -300, -240, 0, 60, 120, 330, 480};
constexpr std::int64_t kMillisPerHour = 3'600'000;

struct Participant {
  ParticipantId id;
  double baseline = 0.0;
  double phase = 0.0;
  int utc_offset = 0;
  double p_high_valence = 0.5;
  double p_high_arousal = 0.5;
};

Timestamp local_time(CivilDate date, std::int64_t millis, int offset) {
  Timestamp ts;
  ts.date = date;
  ts.hour = static_cast<int>(millis / kMillisPerHour);
  ts.minute = static_cast<int>(millis / 60'000 % 60);
  ts.second = static_cast<int>(millis / 1000 % 60);
  ts.millisecond = static_cast<int>(millis % 1000);
  ts.utc_offset_minutes = offset;
  return ts;
}

class Generator {
 public:
  explicit Generator(const CohortConfig& config) : c_(config), rng_(config.seed) {}

  Cohort run() {
    Cohort cohort;
    for (int p = 0; p < c_.n_participants; ++p) {
      const auto participant = draw_participant(p);
      for (int d = 0; d < c_.n_days; ++d) {
        const CivilDate date{std::chrono::sys_days{c_.start_date} + std::chrono::days{d}};
        day(participant, date, cohort);
        ++cohort.scheduled_days;
      }
    }
    return cohort;
  }

 private:
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool bernoulli(double p) { return std::bernoulli_distribution(p)(rng_); }
  double normal(double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng_) : 0.0; }

  Participant draw_participant(int index) {
    Participant p;
    p.id = fmt::format("P{:03d}", index + 1);
    p.baseline = c_.baseline_pir_mean + normal(c_.baseline_pir_sd);
    p.phase = uniform(0.0, 2.0 * std::numbers::pi);
    p.utc_offset = kUtcOffsets[std::uniform_int_distribution<std::size_t>(0, kUtcOffsets.size() - 1)(rng_)];
    p.p_high_valence = uniform(0.3, 0.7);
    p.p_high_arousal = uniform(0.3, 0.7);
    return p;
  }

  double latent(double p_high) {
    const double sign = bernoulli(p_high) ? 1.0 : -1.0;
    return sign * uniform(1.0, 4.0);
  }

  std::int64_t session_millis() {
    const bool night = bernoulli(c_.night_session_fraction);
    const double lo = night ? 0.0 : 7.0;
    const double hi = night ? 6.0 : 24.0;
    return std::uniform_int_distribution<std::int64_t>(static_cast<std::int64_t>(lo * kMillisPerHour),
                                                       static_cast<std::int64_t>(hi * kMillisPerHour) - 1)(rng_);
  }

  void day(const Participant& p, CivilDate date, Cohort& cohort) {
    const double valence = latent(p.p_high_valence);
    const double arousal = latent(p.p_high_arousal);
    if (bernoulli(c_.missing_day_prob)) return;

    const DayKey key{p.id, date};
    cohort.truth.push_back({key, valence < 0.0 ? Label::low : Label::high, arousal < 0.0 ? Label::low : Label::high,
                            valence, arousal});

    const int n_sessions = std::poisson_distribution<int>(c_.sessions_per_day_mean)(rng_);
    std::set<std::int64_t> times;
    while (static_cast<int>(times.size()) < n_sessions) times.insert(session_millis());
    const PirRange usable;
    for (const auto millis : times) {
      const double hour = static_cast<double>(millis) / static_cast<double>(kMillisPerHour);
      const double mean = p.baseline + c_.diurnal_amplitude * std::sin(2.0 * std::numbers::pi * hour / 24.0 + p.phase) +
                          c_.effect_beta * valence + c_.arousal_beta * arousal;
      for (const auto eye : kEyes) {
        const double pir = std::clamp(mean + normal(c_.noise_sd), kPirClampLo, kPirClampHi);
        cohort.events.push_back({p.id, local_time(date, millis, p.utc_offset), eye, pir, !usable.contains(pir)});
      }
    }

    for (int i = 0; i < c_.reports_per_day; ++i) {
      const double center = 8.0 + (i + 0.5) * 14.0 / c_.reports_per_day;
      const double hour = std::clamp(center + uniform(-1.0, 1.0), 0.0, 23.99);
      const auto millis = static_cast<std::int64_t>(hour * static_cast<double>(kMillisPerHour));
      const double v = std::clamp(valence + normal(c_.report_noise_sd), kMoodScoreMin, kMoodScoreMax);
      const double a = std::clamp(arousal + normal(c_.report_noise_sd), kMoodScoreMin, kMoodScoreMax);
      cohort.reports.push_back({p.id, local_time(date, millis, p.utc_offset), v, a});
    }
  }

  const CohortConfig& c_;
  std::mt19937_64 rng_;
};

void require(bool ok, std::string_view message) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, std::string(message));
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void CohortConfig::validate() const {
  require(n_participants >= 1, "n_participants must be >= 1");
  require(n_days >= 1, "n_days must be >= 1");
  require(std::isfinite(sessions_per_day_mean) && sessions_per_day_mean > 0.0, "sessions_per_day_mean must be > 0");
  require(reports_per_day >= 1, "reports_per_day must be >= 1");
  require(std::isfinite(effect_beta), "effect_beta must be finite");
  require(std::isfinite(arousal_beta), "arousal_beta must be finite");
  require(std::isfinite(baseline_pir_mean) && baseline_pir_mean > 0.0 && baseline_pir_mean < 1.0,
          "baseline_pir_mean must be in (0, 1)");
  require(finite_nonneg(baseline_pir_sd), "baseline_pir_sd must be >= 0");
  require(finite_nonneg(diurnal_amplitude), "diurnal_amplitude must be >= 0");
  require(finite_nonneg(noise_sd), "noise_sd must be >= 0");
  require(finite_nonneg(report_noise_sd), "report_noise_sd must be >= 0");
  require(std::isfinite(missing_day_prob) && missing_day_prob >= 0.0 && missing_day_prob <= 1.0,
          "missing_day_prob must be in [0, 1]");
  require(std::isfinite(night_session_fraction) && night_session_fraction >= 0.0 && night_session_fraction <= 1.0,
          "night_session_fraction must be in [0, 1]");
  require(start_date.ok(), "start_date is not a valid date");
}

Cohort generate_cohort(const CohortConfig& config) {
  config.validate();
  return Generator(config).run();
}

std::string format_truth_csv(std::span<const TruthLabel> truth, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += kTruthHeader;
  out += '\n';
  for (const auto& t : truth) {
    out += csv::join_record({t.key.participant_id, format_date(t.key.date),
                             t.valence_label == Label::high ? "1" : "0", t.arousal_label == Label::high ? "1" : "0",
                             csv::format_real(t.valence_latent), csv::format_real(t.arousal_latent)});
    out += '\n';
  }
  return out;
}

void write_truth_csv(std::span<const TruthLabel> truth, const std::filesystem::path& path,
                     const std::vector<std::string>& comments) {
  csv::write_file_atomic(path, format_truth_csv(truth, comments));
}

std::vector<TruthLabel> parse_truth_csv(std::string_view content) {
  const auto lines = csv::split_lines(content);
  std::size_t i = 0;
  while (i < lines.size() && csv::is_comment(lines[i])) ++i;
  if (i == lines.size()) throw Error(ErrorCode::EmptyFile, "truth file has no header line");
  if (lines[i] != kTruthHeader) throw Error(ErrorCode::BadHeader, fmt::format("unexpected header '{}'", lines[i]));
  std::vector<TruthLabel> out;
  for (++i; i < lines.size(); ++i) {
    if (lines[i].empty() || csv::is_comment(lines[i])) continue;
    const auto f = csv::split_record(lines[i]);
    const auto fail = [&] { return Error(ErrorCode::ParseError, fmt::format("line {}: malformed truth row", i + 1)); };
    if (f.size() != 6) throw fail();
    const auto date = parse_date(f[1]);
    const auto v = parse_double(f[4]);
    const auto a = parse_double(f[5]);
    if (!date || !v || !a || (f[2] != "0" && f[2] != "1") || (f[3] != "0" && f[3] != "1")) throw fail();
    out.push_back({{f[0], *date}, f[2] == "1" ? Label::high : Label::low, f[3] == "1" ? Label::high : Label::low, *v,
                   *a});
  }
  return out;
}

FunnelReport funnel_check(std::span<const PirEvent> events, const PirRange& range) {
  FunnelReport r;
  r.generated = events.size();
  for (const auto& e : events) {
    if (range.contains(e.pir)) ++r.usable;
  }
  r.out_of_range = r.generated - r.usable;
  r.out_of_range_fraction =
      r.generated ? static_cast<double>(r.out_of_range) / static_cast<double>(r.generated) : 0.0;
  return r;
}

}  // namespace moodpupilar::simgen
