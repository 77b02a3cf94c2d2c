// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Participant-grouped cross-validation with nested hyperparameter search.
//
// For each outer fold the training participants are split again into inner
// folds; every candidate is scored by the MCC of its pooled inner
// out-of-fold predictions (ties: higher BA, then the smaller hyperparameter
// map). The winner is refit on all outer-training rows and scored on the
// held-out participants.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "moodpupilar/features.hpp"
#include "moodpupilar/fold_plan.hpp"
#include "moodpupilar/gbdt.hpp"
#include "moodpupilar/learner.hpp"
#include "moodpupilar/metrics.hpp"
#include "moodpupilar/stacking.hpp"

namespace moodpupilar::eval {

enum class Target : std::uint8_t { valence, arousal };

inline constexpr Target kTargets[] = {Target::valence, Target::arousal};

std::string_view to_string(Target target) noexcept;
std::optional<Target> parse_target(std::string_view text) noexcept;

/// Labeled rows for one target as a design matrix.
struct Dataset {
  learn::Matrix x;
  std::vector<int> y;
  std::vector<ParticipantId> groups;
  std::vector<DayKey> keys;
};

/// Keeps rows that carry a label for `target`, in input order.
Dataset make_dataset(std::span<const features::DayFeatureRow> rows, Target target);

/// A learner plus the grid searched for it. Grid points override keys of
/// spec.hyperparams; an empty grid means the spec is used as is.
struct SearchSpace {
  learn::LearnerSpec spec;
  std::vector<learn::Hyperparams> grid;
};

struct EnsembleSpec {
  std::vector<SearchSpace> base;
  std::vector<learn::GbdtParams> meta_grid;
  std::size_t top_k = 10;
};

struct ModelConfig {
  std::string name;
  std::variant<SearchSpace, EnsembleSpec> model;
};

inline constexpr std::string_view kEnsembleName = "MoodPupilar";

/// Default grid for `kind`, with a per-kind seed derived from `seed`.
SearchSpace default_search(learn::LearnerKind kind, std::uint64_t seed);
std::vector<learn::GbdtParams> default_meta_grid();
/// All seven learner kinds as base learners, default grids, top_k = 10.
ModelConfig default_ensemble_config(std::uint64_t seed);

/// splitmix64 of (seed, tag); used to give sub-tasks independent seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept;

struct EvalOptions {
  int k = 5;
  int inner_k = 3;
  std::uint64_t seed = 0;
};

/// Component name ("logistic_regression", "meta", ...) and its chosen values.
using ChosenParams = std::vector<std::pair<std::string, learn::Hyperparams>>;

struct FoldResult {
  int fold = 0;
  std::vector<ParticipantId> test_participants;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  ConfusionMatrix cm;
  BalancedAccuracy ba;
  double mcc = 0.0;
  ChosenParams chosen;
  /// Inner plan over this fold's training participants.
  FoldPlan inner_plan;
};

struct Prediction {
  DayKey key;
  int fold = 0;
  int truth = 0;
  double probability = 0.0;
  int predicted = 0;
};

struct EvalReport {
  std::string model;
  Target target = Target::valence;
  std::uint64_t seed = 0;
  int k = 0;
  int inner_k = 0;
  std::string schema_version;
  /// First and last labeled day in the data.
  std::optional<CivilDate> first_day;
  std::optional<CivilDate> last_day;
  std::size_t n_rows = 0;
  std::size_t n_participants = 0;
  FoldPlan outer_plan;

  ConfusionMatrix pooled;
  BalancedAccuracy pooled_ba;
  double pooled_mcc = 0.0;
  double fold_ba_mean = 0.0;
  double fold_ba_sd = 0.0;
  double fold_mcc_mean = 0.0;
  double fold_mcc_sd = 0.0;

  std::vector<FoldResult> per_fold;
  /// Held-out predictions in fold order, then row order.
  std::vector<Prediction> predictions;
  /// Outer and inner train/test splits checked for participant overlap.
  std::size_t splits_checked = 0;
};

/// Published reference scores for the ensemble on its original cohort.
/// Informational only.
struct ReferenceScores {
  double valence_ba = 0.63;
  double valence_mcc = 0.15;
  double arousal_ba = 0.56;
  double arousal_mcc = 0.12;
};
inline constexpr ReferenceScores kReferenceScores{};

/// Throws Error(TooFewGroups) when fewer than k participants have labeled
/// rows, Error(SingleClassDataset) when only one class is present, and
/// Error(InvalidArgument) when k < 2 or inner_k < 2.
EvalReport run_benchmark(std::span<const features::DayFeatureRow> rows, Target target, const ModelConfig& config,
                         const EvalOptions& options);

/// One report per spec, each tuned over default_grid(spec.kind) under the
/// same outer plan that run_benchmark uses for these options.
std::vector<EvalReport> run_baseline_suite(std::span<const features::DayFeatureRow> rows, Target target,
                                           std::span<const learn::LearnerSpec> baseline_specs,
                                           const EvalOptions& options);

struct TrainedEnsemble {
  learn::StackedEnsemble model;
  ChosenParams chosen;
  /// Grouped folds used for tuning.
  FoldPlan tuning_plan;
};

/// Runs the same tuning as one outer fold of run_benchmark, over all labeled
/// rows, then fits the ensemble on them. Throws Error(TooFewGroups) with
/// fewer than inner_k participants and Error(SingleClassDataset).
TrainedEnsemble train_ensemble(std::span<const features::DayFeatureRow> rows, Target target, const EnsembleSpec& spec,
                               int inner_k, std::uint64_t seed);

/// One spec per learner kind, seeds derived from `seed`.
std::vector<learn::LearnerSpec> default_baseline_specs(std::uint64_t seed);

}  // namespace moodpupilar::eval
