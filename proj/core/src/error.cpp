// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/error.hpp"

namespace moodpupilar {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::RatioOutOfUnitInterval: return "RatioOutOfUnitInterval";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::BadEye: return "BadEye";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AllCellsMissing: return "AllCellsMissing";
    case ErrorCode::NoReports: return "NoReports";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::SingleClassDataset: return "SingleClassDataset";
    case ErrorCode::LeakDetected: return "LeakDetected";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace moodpupilar
