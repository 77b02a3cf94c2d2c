// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moodpupilar::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape_field(std::string_view field);

std::string join_record(const std::vector<std::string>& fields);

/// 17 significant digits; parses back to the identical double.
std::string format_real(double value);

/// Lines starting with '#' before the header carry provenance and are skipped
/// by every reader in this library.
inline bool is_comment(std::string_view line) { return !line.empty() && line.front() == '#'; }

/// Writes `content` to a sibling temp file and renames it over `path`.
/// Throws Error(IoError) on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Reads a whole file. Throws Error(FileNotFound) or Error(IoError).
std::string read_file(const std::filesystem::path& path);

/// Splits file contents into lines, stripping a trailing '\r'.
std::vector<std::string> split_lines(std::string_view content);

}  // namespace moodpupilar::csv
