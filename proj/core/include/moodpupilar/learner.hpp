// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// The base-learner zoo. Every learner is a binary probabilistic classifier
// fitted from a LearnerSpec; fitted models are immutable and shareable.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moodpupilar/matrix.hpp"

namespace moodpupilar::learn {

enum class LearnerKind : std::uint8_t {
  logistic_regression,
  decision_tree,
  random_forest,
  knn,
  gaussian_nb,
  linear_svm_sgd,
  gbdt,
};

inline constexpr LearnerKind kAllLearnerKinds[] = {
    LearnerKind::logistic_regression, LearnerKind::decision_tree, LearnerKind::random_forest,
    LearnerKind::knn,                 LearnerKind::gaussian_nb,   LearnerKind::linear_svm_sgd,
    LearnerKind::gbdt,
};

std::string_view to_string(LearnerKind kind) noexcept;
std::optional<LearnerKind> parse_learner_kind(std::string_view text) noexcept;

/// Named numeric hyperparameters. Ordered, so comparing two maps with the
/// same keys compares their value tuples lexicographically.
using Hyperparams = std::map<std::string, double>;

struct LearnerSpec {
  LearnerKind kind = LearnerKind::logistic_regression;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;

  friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

/// Documented keys for a kind, with defaults.
const Hyperparams& default_hyperparams(LearnerKind kind);
/// Small search grid (at most 12 points) used by nested tuning.
const std::vector<Hyperparams>& default_grid(LearnerKind kind);

/// Fills unspecified keys with defaults; throws Error(InvalidConfig) on an
/// unknown key or an out-of-domain value.
LearnerSpec resolve_spec(const LearnerSpec& spec);

/// Binary labels: 0 = low, 1 = high.
using LabelSpan = std::span<const int>;

class Classifier {
 public:
  virtual ~Classifier() = default;

  [[nodiscard]] virtual LearnerKind kind() const noexcept = 0;
  [[nodiscard]] virtual std::size_t n_features() const noexcept = 0;

  /// Probability of the high class for each row. Throws
  /// Error(DimensionMismatch) when the column count differs from training.
  [[nodiscard]] std::vector<double> predict_proba(const Matrix& x) const;
  [[nodiscard]] double predict_row(std::span<const double> x) const;

  /// Writes the model body; load_classifier() reads it back.
  virtual void save(std::ostream& out) const = 0;

 protected:
  [[nodiscard]] virtual double predict_one(std::span<const double> x) const = 0;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

/// Fits a learner of any kind. Throws Error(EmptyMatrix) for an empty matrix,
/// Error(DimensionMismatch) when y does not match, and
/// Error(DegenerateLabels) when training needs both classes and only one is
/// present.
ClassifierPtr fit_learner(const LearnerSpec& spec, const Matrix& x, LabelSpan y);

/// Predicts `p` for every row. Stands in for a learner whose training subset
/// held a single class; serializes as "constant".
ClassifierPtr make_constant_classifier(LearnerKind stands_for, std::size_t n_features, double p);

void save_classifier(const Classifier& model, std::ostream& out);
ClassifierPtr load_classifier(std::istream& in);

}  // namespace moodpupilar::learn
