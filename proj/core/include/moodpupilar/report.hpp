// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "moodpupilar/eval.hpp"

namespace moodpupilar::eval {

/// Structured, indented text form of a report. `comments` become leading
/// `# ` lines.
std::string format_report(const EvalReport& report, std::span<const std::string> comments = {});

/// `model,target,fold,ba,mcc,tp,fp,tn,fn`: one row per fold, then a `pooled`
/// row, for every report in order.
inline constexpr const char* kMetricsHeader = "model,target,fold,ba,mcc,tp,fp,tn,fn";
std::string format_metrics_csv(std::span<const EvalReport> reports, std::span<const std::string> comments = {});

/// `participant_id,date,fold,truth,probability,predicted`.
std::string format_predictions_csv(const EvalReport& report, std::span<const std::string> comments = {});

/// Models as rows, pooled BA and MCC per target as columns, in first-seen
/// model order. Missing cells print as `-`.
std::string format_table(std::span<const EvalReport> reports);

}  // namespace moodpupilar::eval
