// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Stacking ensemble: base learners produce participant-grouped out-of-fold
// probabilities, a GBDT picks the most useful raw features by split gain, and
// a GBDT meta learner is fit on [base probabilities | selected features].

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "moodpupilar/fold_plan.hpp"
#include "moodpupilar/gbdt.hpp"
#include "moodpupilar/learner.hpp"

namespace moodpupilar::learn {

using FitFn = std::function<ClassifierPtr(const Matrix&, LabelSpan)>;

/// One prediction per row from a model fitted on the rows of every other fold.
/// Each fold's split is checked with eval::assert_group_disjoint.
std::vector<double> out_of_fold_predict(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                                        const eval::FoldPlan& plan, const FitFn& fit);

/// fit_learner, except that a single-class training set yields a constant
/// predictor instead of an error.
ClassifierPtr fit_or_constant(const LearnerSpec& spec, const Matrix& x, LabelSpan y);

class StackedEnsemble {
 public:
  [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
  [[nodiscard]] std::size_t meta_input_dim() const noexcept {
    return base_models_.size() + selected_features_.size();
  }
  [[nodiscard]] const std::vector<LearnerSpec>& base_specs() const noexcept { return base_specs_; }
  [[nodiscard]] const std::vector<ClassifierPtr>& base_models() const noexcept { return base_models_; }
  [[nodiscard]] const std::vector<std::size_t>& selected_features() const noexcept { return selected_features_; }
  [[nodiscard]] const GbdtModel& meta_model() const noexcept { return meta_; }
  [[nodiscard]] const GbdtParams& meta_params() const noexcept { return meta_params_; }
  [[nodiscard]] const eval::FoldPlan& oof_plan() const noexcept { return oof_plan_; }
  /// Training-time out-of-fold base probabilities, one column per base learner.
  [[nodiscard]] const Matrix& oof_predictions() const noexcept { return oof_; }

  /// Base probabilities followed by the selected raw columns.
  [[nodiscard]] Matrix meta_inputs(const Matrix& x) const;
  [[nodiscard]] std::vector<double> predict_proba(const Matrix& x) const;

  void save(std::ostream& out) const;
  static StackedEnsemble load(std::istream& in);

 private:
  friend std::vector<StackedEnsemble> fit_stacked_grid(const Matrix&, LabelSpan, std::span<const ParticipantId>,
                                                       const std::vector<LearnerSpec>&, std::span<const GbdtParams>,
                                                       std::size_t, int, std::uint64_t);

  std::size_t n_features_ = 0;
  std::vector<LearnerSpec> base_specs_;
  std::vector<ClassifierPtr> base_models_;
  std::vector<std::size_t> selected_features_;
  GbdtParams meta_params_;
  GbdtModel meta_;
  eval::FoldPlan oof_plan_;
  Matrix oof_;
};

/// Throws Error(InvalidArgument) when inner_k < 2, Error(TooFewGroups) when
/// there are fewer distinct participants than inner folds, plus any learner
/// error (including Error(DegenerateLabels) for single-class y).
StackedEnsemble fit_stacked(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                            const std::vector<LearnerSpec>& base_specs, const GbdtParams& meta_params,
                            std::size_t top_k, int inner_k, std::uint64_t seed);

/// fit_stacked for several meta settings at once. Base out-of-fold
/// predictions and base refits are shared, so result i equals
/// fit_stacked(..., meta_grid[i], ...).
std::vector<StackedEnsemble> fit_stacked_grid(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                                              const std::vector<LearnerSpec>& base_specs,
                                              std::span<const GbdtParams> meta_grid, std::size_t top_k, int inner_k,
                                              std::uint64_t seed);

/// Throws Error(DimensionMismatch).
std::vector<double> predict_stacked(const StackedEnsemble& model, const Matrix& x);

inline constexpr double kDecisionThreshold = 0.5;

/// 1 when p >= 0.5.
inline int hard_label(double probability) noexcept { return probability >= kDecisionThreshold ? 1 : 0; }

}  // namespace moodpupilar::learn
