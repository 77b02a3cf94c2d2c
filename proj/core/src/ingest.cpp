// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/ingest.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "moodpupilar/csv.hpp"

namespace moodpupilar::ingest {
namespace {

using features::DayFeatureRow;
using features::FeatureSchema;
using features::kNumFeatures;

// Index of the header line; throws EmptyFile when there is none.
std::size_t find_header(const std::vector<std::string>& lines) {
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!csv::is_comment(lines[i])) return i;
  }
  throw Error(ErrorCode::EmptyFile, "file has no header line");
}

void expect_header(std::string_view actual, std::string_view expected) {
  if (actual == expected) return;
  const auto got = csv::split_record(actual);
  const auto want = csv::split_record(expected);
  std::string missing;
  for (const auto& col : want) {
    if (std::find(got.begin(), got.end(), col) == got.end()) {
      missing += missing.empty() ? col : ", " + col;
    }
  }
  throw Error(ErrorCode::BadHeader,
              missing.empty() ? fmt::format("expected header '{}', got '{}'", expected, actual)
                              : fmt::format("header is missing column(s): {}", missing));
}

std::optional<std::string> field_or_null(const std::vector<std::string>& fields, std::size_t i) {
  if (i >= fields.size() || fields[i].empty()) return std::nullopt;
  return fields[i];
}

std::string comment_block(const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  return out;
}

std::string label_token(const std::optional<Label>& label) {
  if (!label) return {};
  return *label == Label::high ? "1" : "0";
}

std::string optional_real(const std::optional<double>& value) {
  return value ? csv::format_real(*value) : std::string{};
}

double parse_real_or_throw(const std::string& text, std::size_t line, std::string_view column) {
  auto v = parse_double(text);
  if (!v) {
    throw Error(ErrorCode::ParseError,
                fmt::format("line {}: column '{}' is not a number: '{}'", line, column, text));
  }
  return *v;
}

}  // namespace

IngestReport summarize_events(std::span<const PirEvent> events) {
  IngestReport report;
  report.total_events = events.size();
  report.parsed_ok = events.size();
  std::set<ParticipantId> participants;
  std::set<DayKey> days;
  std::set<std::pair<ParticipantId, std::int64_t>> instances;
  for (const auto& e : events) {
    if (e.out_of_range) ++report.out_of_range;
    participants.insert(e.participant_id);
    days.insert(DayKey{e.participant_id, e.timestamp.date});
    instances.emplace(e.participant_id, e.timestamp.utc_epoch_millis());
  }
  report.usable = report.parsed_ok - report.out_of_range;
  report.participants = participants.size();
  report.participant_days = days.size();
  report.per_participant_daily_mean_events =
      days.empty() ? 0.0 : static_cast<double>(instances.size()) / static_cast<double>(days.size());
  return report;
}

PirReadResult parse_pir_csv(std::string_view content, const PirRange& range) {
  const auto lines = csv::split_lines(content);
  const std::size_t header = find_header(lines);
  expect_header(lines[header], kPirHeader);

  PirReadResult result;
  std::size_t total = 0;
  for (std::size_t i = header + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++total;
    const std::size_t line_no = i + 1;
    const auto fields = csv::split_record(lines[i]);
    if (fields.size() != 4) {
      result.diagnostics.push_back(
          {line_no, ErrorCode::ParseError, fmt::format("expected 4 fields, got {}", fields.size())});
      continue;
    }
    RawPirEvent raw{field_or_null(fields, 0), field_or_null(fields, 1), field_or_null(fields, 2),
                    field_or_null(fields, 3)};
    auto validated = validate_event(raw, range);
    if (auto* err = std::get_if<ValidationError>(&validated)) {
      result.diagnostics.push_back({line_no, err->code, err->message});
      continue;
    }
    result.events.push_back(std::move(std::get<PirEvent>(validated)));
  }
  result.report = summarize_events(result.events);
  result.report.total_events = total;
  result.report.malformed = total - result.report.parsed_ok;
  return result;
}

PirReadResult read_pir_csv(const std::filesystem::path& path, const PirRange& range) {
  return parse_pir_csv(csv::read_file(path), range);
}

MoodReadResult parse_mood_csv(std::string_view content) {
  const auto lines = csv::split_lines(content);
  const std::size_t header = find_header(lines);
  expect_header(lines[header], kMoodHeader);

  MoodReadResult result;
  for (std::size_t i = header + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ++result.total_rows;
    const std::size_t line_no = i + 1;
    const auto fields = csv::split_record(lines[i]);
    if (fields.size() != 4) {
      result.diagnostics.push_back(
          {line_no, ErrorCode::ParseError, fmt::format("expected 4 fields, got {}", fields.size())});
      continue;
    }
    RawMoodReport raw{field_or_null(fields, 0), field_or_null(fields, 1), field_or_null(fields, 2),
                      field_or_null(fields, 3)};
    auto validated = validate_report(raw);
    if (auto* err = std::get_if<ValidationError>(&validated)) {
      result.diagnostics.push_back({line_no, err->code, err->message});
      continue;
    }
    result.reports.push_back(std::move(std::get<MoodReport>(validated)));
  }
  if (result.total_rows == 0) result.warnings.emplace_back("mood file has no data rows");
  std::stable_sort(result.reports.begin(), result.reports.end(), [](const MoodReport& a, const MoodReport& b) {
    return std::forward_as_tuple(a.participant_id, a.timestamp.utc_epoch_millis()) <
           std::forward_as_tuple(b.participant_id, b.timestamp.utc_epoch_millis());
  });
  return result;
}

MoodReadResult read_mood_csv(const std::filesystem::path& path) { return parse_mood_csv(csv::read_file(path)); }

std::string format_pir_csv(std::span<const PirEvent> events, const std::vector<std::string>& comments) {
  std::string out = comment_block(comments);
  out += kPirHeader;
  out += '\n';
  for (const auto& e : events) {
    out += csv::join_record({e.participant_id, e.timestamp.to_iso8601(), std::string(to_token(e.eye)),
                             csv::format_real(e.pir)});
    out += '\n';
  }
  return out;
}

void write_pir_csv(std::span<const PirEvent> events, const std::filesystem::path& path,
                   const std::vector<std::string>& comments) {
  csv::write_file_atomic(path, format_pir_csv(events, comments));
}

std::string format_mood_csv(std::span<const MoodReport> reports, const std::vector<std::string>& comments) {
  std::string out = comment_block(comments);
  out += kMoodHeader;
  out += '\n';
  for (const auto& r : reports) {
    out += csv::join_record({r.participant_id, r.timestamp.to_iso8601(), csv::format_real(r.valence),
                             csv::format_real(r.arousal)});
    out += '\n';
  }
  return out;
}

void write_mood_csv(std::span<const MoodReport> reports, const std::filesystem::path& path,
                    const std::vector<std::string>& comments) {
  csv::write_file_atomic(path, format_mood_csv(reports, comments));
}

std::string feature_header() {
  std::vector<std::string> cols{"participant_id", "date"};
  const auto& names = FeatureSchema::canonical().names();
  cols.insert(cols.end(), names.begin(), names.end());
  for (const char* c : {"valence_label", "arousal_label", "valence_mean", "arousal_mean", "n_reports"}) {
    cols.emplace_back(c);
  }
  for (const auto& n : names) cols.push_back("imputed_" + n);
  return csv::join_record(cols);
}

std::string format_feature_csv(std::span<const DayFeatureRow> rows, const std::vector<std::string>& comments) {
  std::string out = comment_block(comments);
  out += feature_header();
  out += '\n';
  std::vector<std::string> fields;
  fields.reserve(2 + 2 * kNumFeatures + 5);
  for (const auto& row : rows) {
    fields.clear();
    fields.push_back(row.key.participant_id);
    fields.push_back(format_date(row.key.date));
    for (const double v : row.features) fields.push_back(csv::format_real(v));
    fields.push_back(label_token(row.valence_label));
    fields.push_back(label_token(row.arousal_label));
    fields.push_back(optional_real(row.valence_mean));
    fields.push_back(optional_real(row.arousal_mean));
    fields.push_back(std::to_string(row.n_reports));
    for (const bool m : row.imputed_mask) fields.emplace_back(m ? "1" : "0");
    out += csv::join_record(fields);
    out += '\n';
  }
  return out;
}

void write_feature_csv(std::span<const DayFeatureRow> rows, const std::filesystem::path& path,
                       const std::vector<std::string>& comments) {
  csv::write_file_atomic(path, format_feature_csv(rows, comments));
}

std::vector<DayFeatureRow> parse_feature_csv(std::string_view content) {
  const auto lines = csv::split_lines(content);
  const std::size_t header = find_header(lines);
  const std::string expected = feature_header();
  expect_header(lines[header], expected);
  const auto columns = csv::split_record(expected);

  std::vector<DayFeatureRow> rows;
  for (std::size_t i = header + 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::size_t line_no = i + 1;
    const auto fields = csv::split_record(lines[i]);
    if (fields.size() != columns.size()) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: expected {} fields, got {}", line_no,
                                                     columns.size(), fields.size()));
    }
    DayFeatureRow row;
    row.key.participant_id = fields[0];
    auto date = parse_date(fields[1]);
    if (!date || fields[0].empty()) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: bad participant or date", line_no));
    }
    row.key.date = *date;
    std::size_t c = 2;
    for (std::size_t f = 0; f < kNumFeatures; ++f, ++c) {
      row.features[f] = parse_real_or_throw(fields[c], line_no, columns[c]);
    }
    for (auto* label : {&row.valence_label, &row.arousal_label}) {
      const auto& tok = fields[c];
      if (tok == "1") {
        *label = Label::high;
      } else if (tok == "0") {
        *label = Label::low;
      } else if (!tok.empty()) {
        throw Error(ErrorCode::ParseError, fmt::format("line {}: bad label '{}'", line_no, tok));
      }
      ++c;
    }
    for (auto* mean : {&row.valence_mean, &row.arousal_mean}) {
      if (!fields[c].empty()) *mean = parse_real_or_throw(fields[c], line_no, columns[c]);
      ++c;
    }
    const double n_reports = parse_real_or_throw(fields[c], line_no, columns[c]);
    if (n_reports < 0 || n_reports != static_cast<double>(static_cast<std::size_t>(n_reports))) {
      throw Error(ErrorCode::ParseError, fmt::format("line {}: bad n_reports", line_no));
    }
    row.n_reports = static_cast<std::size_t>(n_reports);
    ++c;
    for (std::size_t f = 0; f < kNumFeatures; ++f, ++c) {
      if (fields[c] != "0" && fields[c] != "1") {
        throw Error(ErrorCode::ParseError, fmt::format("line {}: bad mask value '{}'", line_no, fields[c]));
      }
      row.imputed_mask[f] = fields[c] == "1";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DayFeatureRow> read_feature_csv(const std::filesystem::path& path) {
  return parse_feature_csv(csv::read_file(path));
}

}  // namespace moodpupilar::ingest
