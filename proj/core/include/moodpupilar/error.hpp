// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace moodpupilar {

enum class ErrorCode {
  // Row-level validation.
  MissingField,
  NonFiniteValue,
  RatioOutOfUnitInterval,
  BadTimestamp,
  BadEye,
  ScoreOutOfRange,
  // File handling.
  FileNotFound,
  BadHeader,
  EmptyFile,
  IoError,
  ParseError,
  // Featurization and labeling.
  AllCellsMissing,
  NoReports,
  // Learning and evaluation.
  DegenerateLabels,
  EmptyMatrix,
  DimensionMismatch,
  TooFewGroups,
  SingleClassDataset,
  LeakDetected,
  // Configuration.
  InvalidConfig,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception type thrown by every fallible library operation. The code is
/// stable and machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace moodpupilar
