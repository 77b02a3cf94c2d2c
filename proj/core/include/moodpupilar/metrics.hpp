// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

namespace moodpupilar::eval {

/// Positive class is `high` (label 1).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  [[nodiscard]] std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Throws Error(DimensionMismatch) when the spans differ in length.
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);

struct BalancedAccuracy {
  double value = 0.0;
  /// Set when one class has no true instances; value is then the rate of the
  /// class that does (0 when neither does).
  bool degenerate = false;
};

/// (TPR + TNR) / 2.
BalancedAccuracy balanced_accuracy(const ConfusionMatrix& cm) noexcept;

/// Matthews correlation coefficient; 0 when any marginal is empty.
double mcc(const ConfusionMatrix& cm) noexcept;

}  // namespace moodpupilar::eval
