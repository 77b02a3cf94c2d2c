// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "moodpupilar/error.hpp"

namespace moodpupilar::eval {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  tp += other.tp;
  fp += other.fp;
  tn += other.tn;
  fn += other.fn;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("{} labels vs {} predictions", truth.size(), predicted.size()));
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 1) {
      ++(predicted[i] == 1 ? cm.tp : cm.fn);
    } else {
      ++(predicted[i] == 1 ? cm.fp : cm.tn);
    }
  }
  return cm;
}

BalancedAccuracy balanced_accuracy(const ConfusionMatrix& cm) noexcept {
  const std::uint64_t positives = cm.tp + cm.fn;
  const std::uint64_t negatives = cm.tn + cm.fp;
  const double tpr = positives ? static_cast<double>(cm.tp) / static_cast<double>(positives) : 0.0;
  const double tnr = negatives ? static_cast<double>(cm.tn) / static_cast<double>(negatives) : 0.0;
  if (positives && negatives) return {(tpr + tnr) / 2.0, false};
  if (positives) return {tpr, true};
  if (negatives) return {tnr, true};
  return {0.0, true};
}

double mcc(const ConfusionMatrix& cm) noexcept {
  const auto tp = static_cast<long double>(cm.tp);
  const auto fp = static_cast<long double>(cm.fp);
  const auto tn = static_cast<long double>(cm.tn);
  const auto fn = static_cast<long double>(cm.fn);
  const long double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (denom == 0.0L) return 0.0;
  return static_cast<double>((tp * tn - fp * fn) / std::sqrt(denom));
}

}  // namespace moodpupilar::eval
