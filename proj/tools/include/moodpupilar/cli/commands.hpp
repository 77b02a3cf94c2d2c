// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "moodpupilar/cli/config.hpp"
#include "moodpupilar/error.hpp"
#include "moodpupilar/ingest.hpp"

namespace moodpupilar::cli {

/// Command-line overrides applied on top of the config file.
struct Overrides {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> features;
};

RunConfig resolve_config(const Overrides& overrides);

/// Destination for progress lines; null when --quiet.
using Log = std::ostream*;

void cmd_simulate(const RunConfig& config, Log log);
ingest::IngestReport cmd_ingest(const RunConfig& config, Log log);
void cmd_featurize(const RunConfig& config, Log log);
void cmd_evaluate(const RunConfig& config, Log log);
void cmd_train(const RunConfig& config, Log log);
void cmd_predict(const RunConfig& config, Log log);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitInternal = 4;

int exit_code_for(ErrorCode code) noexcept;

/// Parses arguments, runs one subcommand and returns the exit code. Errors
/// go to `err` as `error: <Code>: <message>`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace moodpupilar::cli
