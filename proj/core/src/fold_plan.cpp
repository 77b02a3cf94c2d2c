// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/fold_plan.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <fmt/format.h>

namespace moodpupilar::eval {

int FoldPlan::fold_of(const ParticipantId& participant) const {
  const auto it = assignment.find(participant);
  if (it == assignment.end()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("participant '{}' is not in the fold plan", participant));
  }
  return it->second;
}

std::vector<ParticipantId> FoldPlan::participants_in(int fold) const {
  std::vector<ParticipantId> out;
  for (const auto& [pid, f] : assignment) {
    if (f == fold) out.push_back(pid);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (const auto& [pid, f] : assignment) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

FoldPlan make_fold_plan(std::span<const ParticipantId> participants, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("need k >= 2 folds, got {}", k));
  std::vector<ParticipantId> unique(participants.begin(), participants.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (unique.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewGroups,
                fmt::format("{} participants cannot fill {} folds", unique.size(), k));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(unique.begin(), unique.end(), rng);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    plan.assignment.emplace(unique[i], static_cast<int>(i % static_cast<std::size_t>(k)));
  }
  return plan;
}

RowSplit split_rows(const FoldPlan& plan, std::span<const ParticipantId> groups, int fold) {
  RowSplit split;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    (plan.fold_of(groups[i]) == fold ? split.test : split.train).push_back(i);
  }
  return split;
}

void assert_group_disjoint(std::span<const ParticipantId> groups, const RowSplit& split) {
  std::set<ParticipantId> train;
  for (const std::size_t i : split.train) train.insert(groups[i]);
  for (const std::size_t i : split.test) {
    if (train.contains(groups[i])) {
      throw Error(ErrorCode::LeakDetected,
                  fmt::format("participant '{}' appears in both train and test rows", groups[i]));
    }
  }
}

}  // namespace moodpupilar::eval
