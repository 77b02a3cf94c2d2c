// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Grouped k-fold assignment: every participant lands in exactly one fold, so
// no participant's rows ever sit on both sides of a split.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "moodpupilar/domain.hpp"

namespace moodpupilar::eval {

struct FoldPlan {
  int k = 0;
  std::map<ParticipantId, int> assignment;
  std::uint64_t seed = 0;

  /// Throws Error(InvalidArgument) for an unknown participant.
  [[nodiscard]] int fold_of(const ParticipantId& participant) const;
  [[nodiscard]] std::vector<ParticipantId> participants_in(int fold) const;
  [[nodiscard]] std::vector<std::size_t> fold_sizes() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Deduplicates and sorts the participants, shuffles them with a
/// std::mt19937_64 seeded by `seed`, then deals them round-robin into k folds.
/// Throws Error(TooFewGroups) when there are fewer participants than folds,
/// Error(InvalidArgument) when k < 2.
FoldPlan make_fold_plan(std::span<const ParticipantId> participants, int k, std::uint64_t seed);

struct RowSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Rows whose participant is in `fold` go to test, all others to train.
RowSplit split_rows(const FoldPlan& plan, std::span<const ParticipantId> groups, int fold);

/// Throws Error(LeakDetected) when any participant has rows on both sides.
void assert_group_disjoint(std::span<const ParticipantId> groups, const RowSplit& split);

}  // namespace moodpupilar::eval
