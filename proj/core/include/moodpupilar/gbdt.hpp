// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Second-order gradient boosting of the logistic loss with exact greedy,
// depth-wise regression trees.
//
// Each round fits one tree to g = p - y and h = p(1 - p). A split is scored by
//
//   gain = 1/2 [G_L^2 / (H_L + l2) + G_R^2 / (H_R + l2) - (G_L + G_R)^2 / (H_L + H_R + l2)] - gamma
//
// and taken only when gain > 0. Leaves predict -G / (H + l2), shrunk by the
// learning rate. If a full step would raise the training loss the step is
// halved until it does not (and the tree is discarded if no step helps), so
// the training loss never increases from one round to the next.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "moodpupilar/learner.hpp"

namespace moodpupilar::learn {

struct GbdtParams {
  int n_trees = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_leaf = 5;
  double l2_lambda = 1.0;
  double gain_gamma = 0.0;

  /// Throws Error(InvalidConfig).
  void validate() const;

  static GbdtParams from_hyperparams(const Hyperparams& hp);
  [[nodiscard]] Hyperparams to_hyperparams() const;

  friend bool operator==(const GbdtParams&, const GbdtParams&) = default;
};

/// Binary regression tree in a flat node array; node 0 is the root. Samples
/// with x[feature] <= threshold go left.
struct RegressionTree {
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;

  [[nodiscard]] double predict(std::span<const double> x) const noexcept;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

class GbdtModel final : public Classifier {
 public:
  GbdtModel() = default;

  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::gbdt; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }
  void save(std::ostream& out) const override;
  static GbdtModel load(std::istream& in);

  /// Log-odds before the sigmoid.
  [[nodiscard]] double raw_score(std::span<const double> x) const noexcept;

  [[nodiscard]] double prior() const noexcept { return prior_; }
  [[nodiscard]] const std::vector<RegressionTree>& trees() const noexcept { return trees_; }
  /// Cumulative split gain per feature over all kept trees.
  [[nodiscard]] const std::vector<double>& feature_gain() const noexcept { return feature_gain_; }
  /// Sum of every kept split's gain, accumulated split by split.
  [[nodiscard]] double total_gain() const noexcept { return total_gain_; }
  /// Mean training log-loss after initialization and after each round.
  [[nodiscard]] const std::vector<double>& loss_history() const noexcept { return loss_history_; }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override;

 private:
  friend GbdtModel fit_gbdt(const Matrix& x, LabelSpan y, const GbdtParams& params);

  std::size_t n_features_ = 0;
  double prior_ = 0.5;
  double base_score_ = 0.0;
  std::vector<RegressionTree> trees_;
  std::vector<double> feature_gain_;
  double total_gain_ = 0.0;
  std::vector<double> loss_history_;
};

/// Throws Error(EmptyMatrix), Error(DimensionMismatch) or
/// Error(DegenerateLabels) (single class with n_trees > 0).
GbdtModel fit_gbdt(const Matrix& x, LabelSpan y, const GbdtParams& params);

/// Fits a GBDT and returns the top_k features by cumulative split gain, ties
/// to the lower index, sorted ascending. Features that never split pad the
/// selection in index order.
std::vector<std::size_t> select_features(const Matrix& x, LabelSpan y, const GbdtParams& params,
                                         std::size_t top_k);

/// Mean logistic loss of probabilities against labels, with p clamped away
/// from 0 and 1.
double log_loss(std::span<const double> probabilities, LabelSpan y);

double sigmoid(double z) noexcept;

}  // namespace moodpupilar::learn
