// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "moodpupilar/error.hpp"
#include "moodpupilar/metrics.hpp"
#include "oracles.hpp"

namespace moodpupilar::eval {
namespace {

TEST(BalancedAccuracy, Examples) {
  EXPECT_DOUBLE_EQ(balanced_accuracy({.tp = 3, .fp = 2, .tn = 2, .fn = 1}).value, 0.625);
  EXPECT_EQ(balanced_accuracy({.tp = 4, .fp = 0, .tn = 6, .fn = 0}).value, 1.0);
  EXPECT_EQ(balanced_accuracy({.tp = 4, .fp = 6, .tn = 0, .fn = 0}).value, 0.5);
}

TEST(BalancedAccuracy, DegenerateClassIsFlagged) {
  const auto only_positives = balanced_accuracy({.tp = 3, .fp = 0, .tn = 0, .fn = 1});
  EXPECT_TRUE(only_positives.degenerate);
  EXPECT_DOUBLE_EQ(only_positives.value, 0.75);
  const auto empty = balanced_accuracy({});
  EXPECT_TRUE(empty.degenerate);
  EXPECT_EQ(empty.value, 0.0);
  EXPECT_FALSE(balanced_accuracy({.tp = 1, .fp = 1, .tn = 1, .fn = 1}).degenerate);
}

TEST(Mcc, Examples) {
  EXPECT_EQ(mcc({.tp = 5, .fp = 0, .tn = 5, .fn = 0}), 1.0);
  EXPECT_EQ(mcc({.tp = 0, .fp = 5, .tn = 0, .fn = 5}), -1.0);
  EXPECT_NEAR(mcc({.tp = 6, .fp = 1, .tn = 3, .fn = 2}), 16.0 / std::sqrt(1120.0), 1e-15);
  EXPECT_NEAR(mcc({.tp = 6, .fp = 1, .tn = 3, .fn = 2}), 0.4781, 5e-5);
  EXPECT_EQ(mcc({.tp = 4, .fp = 6, .tn = 0, .fn = 0}), 0.0);
  EXPECT_EQ(mcc({}), 0.0);
}

TEST(Metrics, MatchExactOracleUpToTwelve) {
  int cases = 0;
  for (int tp = 0; tp <= 12; ++tp) {
    for (int fp = 0; tp + fp <= 12; ++fp) {
      for (int tn = 0; tp + fp + tn <= 12; ++tn) {
        for (int fn = 0; tp + fp + tn + fn <= 12; ++fn) {
          const ConfusionMatrix cm{static_cast<std::uint64_t>(tp), static_cast<std::uint64_t>(fp),
                                   static_cast<std::uint64_t>(tn), static_cast<std::uint64_t>(fn)};
          EXPECT_NEAR(mcc(cm), oracle::mcc(tp, fp, tn, fn), 1e-12);
          if (tp + fn > 0 && tn + fp > 0) {
            const auto ba = balanced_accuracy(cm);
            EXPECT_FALSE(ba.degenerate);
            EXPECT_NEAR(ba.value, oracle::balanced_accuracy(tp, fp, tn, fn).convert_to<double>(), 1e-12);
          }
          ++cases;
        }
      }
    }
  }
  EXPECT_EQ(cases, 1820);
}

TEST(Metrics, LabelSwapAntisymmetry) {
  for (std::uint64_t tp = 0; tp <= 6; ++tp) {
    for (std::uint64_t fp = 0; fp <= 6; ++fp) {
      for (std::uint64_t tn = 0; tn <= 6; ++tn) {
        for (std::uint64_t fn = 0; fn <= 6; ++fn) {
          const ConfusionMatrix cm{tp, fp, tn, fn};
          const ConfusionMatrix swapped{fn, tn, fp, tp};
          EXPECT_NEAR(mcc(swapped), -mcc(cm), 1e-15);
          if (tp + fn > 0 && tn + fp > 0) {
            EXPECT_NEAR(balanced_accuracy(swapped).value, 1.0 - balanced_accuracy(cm).value, 1e-15);
          }
        }
      }
    }
  }
}

TEST(Confusion, CountsAndSum) {
  const std::vector<int> truth{1, 1, 0, 0, 1, 0};
  const std::vector<int> pred{1, 0, 0, 1, 1, 0};
  const auto cm = confusion(truth, pred);
  EXPECT_EQ(cm, (ConfusionMatrix{.tp = 2, .fp = 1, .tn = 2, .fn = 1}));
  EXPECT_EQ(cm.total(), truth.size());
  auto sum = cm;
  sum += cm;
  EXPECT_EQ(sum, (ConfusionMatrix{.tp = 4, .fp = 2, .tn = 4, .fn = 2}));
  const std::vector<int> short_pred{1};
  EXPECT_THROW(confusion(truth, short_pred), Error);
}

}  // namespace
}  // namespace moodpupilar::eval
