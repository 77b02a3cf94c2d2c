// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

// Driving the command-line front end in-process.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "moodpupilar/cli/commands.hpp"

namespace moodpupilar::testing {

/// A config small enough for a full simulate-to-evaluate run in seconds.
inline constexpr const char* kSmallConfig = R"(# small end-to-end run
seed: 11
targets: [valence]
model:
  base_learners: [gaussian_nb, decision_tree, logistic_regression]
  grids:
    decision_tree:
      - {max_depth: 2}
      - {max_depth: 3}
    logistic_regression:
      - {l2: 1}
  meta_grid:
    - {n_trees: 20, max_depth: 2}
  top_k: 5
eval:
  k: 3
  inner_k: 2
simulate:
  n_participants: 6
  n_days: 8
  effect_beta: 0.05
  noise_sd: 0.02
)";

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "moodpupilar");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace moodpupilar::testing
