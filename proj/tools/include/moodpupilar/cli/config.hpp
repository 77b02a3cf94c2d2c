// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Run configuration for the command-line tool. Read from YAML; every field
// has a default and unknown keys are rejected.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "moodpupilar/domain.hpp"
#include "moodpupilar/eval.hpp"
#include "moodpupilar/features.hpp"
#include "moodpupilar/gbdt.hpp"
#include "moodpupilar/learner.hpp"
#include "moodpupilar/simgen.hpp"

namespace moodpupilar::cli {

struct Paths {
  /// Relative paths below are resolved against this directory.
  std::filesystem::path out_dir = ".";
  std::filesystem::path pir_events = "pir_events.csv";
  std::filesystem::path mood_reports = "mood_reports.csv";
  std::filesystem::path truth_labels = "truth_labels.csv";
  std::filesystem::path features = "features.csv";
  /// Model files are `<model_prefix>_<target>.txt`.
  std::filesystem::path model_prefix = "model";
  std::filesystem::path predictions = "predictions.csv";

  friend bool operator==(const Paths&, const Paths&) = default;
};

struct ModelSection {
  std::vector<learn::LearnerKind> base_learners;
  /// Per-kind search grids; kinds not listed use default_grid().
  std::map<learn::LearnerKind, std::vector<learn::Hyperparams>> grids;
  std::vector<learn::GbdtParams> meta_grid;
  std::size_t top_k = 10;

  friend bool operator==(const ModelSection&, const ModelSection&) = default;
};

struct EvalSection {
  int k = 5;
  int inner_k = 3;

  friend bool operator==(const EvalSection&, const EvalSection&) = default;
};

struct RunConfig {
  std::uint64_t seed = 0;
  Paths paths;
  PirRange pir_range;
  features::FeaturizeOptions features;
  std::vector<eval::Target> targets{eval::Target::valence, eval::Target::arousal};
  ModelSection model;
  EvalSection eval;
  simgen::CohortConfig simulate;

  /// Seed-derived pieces use `seed`; simulate.seed mirrors it.
  [[nodiscard]] eval::ModelConfig ensemble_config() const;
  [[nodiscard]] std::vector<learn::LearnerSpec> baseline_specs() const;
  [[nodiscard]] eval::EvalOptions eval_options() const;
  [[nodiscard]] std::filesystem::path resolve(const std::filesystem::path& p) const;
  [[nodiscard]] std::filesystem::path model_path(eval::Target target) const;
};

/// Defaults throughout.
RunConfig default_config();

/// Parses YAML text. When the text holds `# config | ` provenance lines (as
/// written into every output), those lines are used instead. Throws
/// Error(InvalidConfig) on syntax errors, unknown keys and invalid values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical YAML of the fully resolved config; parse_config() of it gives
/// back an equal config. paths.out_dir is a run location and is left out.
std::string to_yaml(const RunConfig& config);

/// Hex SHA-256 of to_yaml(config).
std::string config_hash(const RunConfig& config);

/// Comment lines embedded in every output: tool version, hash, seed, then
/// the resolved config prefixed with `config | `.
std::vector<std::string> provenance(const RunConfig& config, std::string_view artifact);

inline constexpr std::string_view kConfigPrefix = "# config | ";

}  // namespace moodpupilar::cli
