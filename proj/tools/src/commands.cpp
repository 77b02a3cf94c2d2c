// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <sstream>

#include "moodpupilar/csv.hpp"
#include "moodpupilar/eval.hpp"
#include "moodpupilar/features.hpp"
#include "moodpupilar/labeling.hpp"
#include "moodpupilar/report.hpp"
#include "moodpupilar/simgen.hpp"
#include "moodpupilar/stacking.hpp"

namespace moodpupilar::cli {
namespace {

template <class... Args>
void say(Log log, fmt::format_string<Args...> format, Args&&... args) {
  if (log != nullptr) *log << fmt::format(format, std::forward<Args>(args)...);
}

void prepare_dir(const std::filesystem::path& file) {
  const auto dir = file.parent_path();
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create directory {}: {}", dir.string(), ec.message()));
}

void write(const std::filesystem::path& path, std::string_view content, Log log) {
  prepare_dir(path);
  csv::write_file_atomic(path, content);
  say(log, "wrote {}\n", path.string());
}

std::vector<std::string> with(std::vector<std::string> lines, const std::vector<std::string>& extra) {
  lines.insert(lines.end(), extra.begin(), extra.end());
  return lines;
}

void report_diagnostics(const std::vector<ingest::Diagnostic>& diagnostics, std::string_view file, Log log) {
  constexpr std::size_t kShown = 10;
  for (std::size_t i = 0; i < diagnostics.size() && i < kShown; ++i) {
    const auto& d = diagnostics[i];
    say(log, "{}:{}: skipped row: {}: {}\n", file, d.line, to_string(d.code), d.message);
  }
  if (diagnostics.size() > kShown) say(log, "{}: {} more skipped rows\n", file, diagnostics.size() - kShown);
}

std::string funnel_text(const ingest::IngestReport& r) {
  return fmt::format(
      "total_events: {}\nparsed_ok: {}\nmalformed: {}\nout_of_range: {}\nusable: {}\nparticipants: {}\n"
      "participant_days: {}\nper_participant_daily_mean_events: {}\n",
      r.total_events, r.parsed_ok, r.malformed, r.out_of_range, r.usable, r.participants, r.participant_days,
      csv::format_real(r.per_participant_daily_mean_events));
}

std::vector<features::DayFeatureRow> load_features(const RunConfig& config) {
  return ingest::read_feature_csv(config.resolve(config.paths.features));
}

learn::StackedEnsemble load_model(const std::filesystem::path& path) {
  std::string body;
  for (const auto& line : csv::split_lines(csv::read_file(path))) {
    if (csv::is_comment(line)) continue;
    body += line;
    body += '\n';
  }
  std::istringstream in(body);
  return learn::StackedEnsemble::load(in);
}

}  // namespace

RunConfig resolve_config(const Overrides& o) {
  RunConfig config = o.config ? load_config(*o.config) : default_config();
  if (o.seed) {
    config.seed = *o.seed;
    config.simulate.seed = *o.seed;
  }
  if (o.out) config.paths.out_dir = *o.out;
  if (o.model) config.paths.model_prefix = *o.model;
  if (o.features) config.paths.features = *o.features;
  return config;
}

void cmd_simulate(const RunConfig& config, Log log) {
  const auto cohort = simgen::generate_cohort(config.simulate);
  const auto prov = provenance(config, "simulate");
  write(config.resolve(config.paths.pir_events), ingest::format_pir_csv(cohort.events, prov), log);
  write(config.resolve(config.paths.mood_reports), ingest::format_mood_csv(cohort.reports, prov), log);
  write(config.resolve(config.paths.truth_labels), simgen::format_truth_csv(cohort.truth, prov), log);
  const auto funnel = simgen::funnel_check(cohort.events, config.pir_range);
  say(log, "scheduled days {}, emitted days {}, events {}, usable {} ({:.2f}% out of range)\n",
      cohort.scheduled_days, cohort.truth.size(), funnel.generated, funnel.usable,
      100.0 * funnel.out_of_range_fraction);
}

ingest::IngestReport cmd_ingest(const RunConfig& config, Log log) {
  const auto pir_path = config.resolve(config.paths.pir_events);
  const auto mood_path = config.resolve(config.paths.mood_reports);
  const auto pir = ingest::read_pir_csv(pir_path, config.pir_range);
  report_diagnostics(pir.diagnostics, pir_path.string(), log);
  const auto mood = ingest::read_mood_csv(mood_path);
  report_diagnostics(mood.diagnostics, mood_path.string(), log);
  for (const auto& w : mood.warnings) say(log, "{}: warning: {}\n", mood_path.string(), w);

  std::string text;
  for (const auto& line : provenance(config, "ingest")) text += "# " + line + "\n";
  text += funnel_text(pir.report);
  text += fmt::format("mood_rows: {}\nmood_reports_ok: {}\nmood_malformed: {}\n", mood.total_rows,
                      mood.reports.size(), mood.diagnostics.size());
  say(log, "{}", funnel_text(pir.report));
  write(config.resolve("ingest_report.txt"), text, log);
  return pir.report;
}

void cmd_featurize(const RunConfig& config, Log log) {
  const auto pir_path = config.resolve(config.paths.pir_events);
  const auto mood_path = config.resolve(config.paths.mood_reports);
  const auto pir = ingest::read_pir_csv(pir_path, config.pir_range);
  report_diagnostics(pir.diagnostics, pir_path.string(), log);
  const auto mood = ingest::read_mood_csv(mood_path);
  report_diagnostics(mood.diagnostics, mood_path.string(), log);

  const auto filtered = filter_pir(pir.events, config.pir_range);
  auto rows = features::build_day_rows(filtered.kept, features::FeatureSchema::canonical(), config.features);
  const auto joined = labeling::join_labels(std::move(rows), labeling::daily_moods(mood.reports));
  say(log, "events kept {}, dropped {}; feature days {}, mood days {}, matched {}\n", filtered.kept.size(),
      filtered.dropped, joined.report.feature_days, joined.report.mood_days, joined.report.matched);
  write(config.resolve(config.paths.features),
        ingest::format_feature_csv(joined.rows, provenance(config, "featurize")), log);
}

void cmd_evaluate(const RunConfig& config, Log log) {
  const auto rows = load_features(config);
  const auto options = config.eval_options();
  const auto ensemble = config.ensemble_config();
  const auto baselines = config.baseline_specs();

  std::vector<eval::EvalReport> reports;
  for (const auto target : config.targets) {
    say(log, "evaluating {} ({} baselines + ensemble, k={}, inner_k={})\n", eval::to_string(target),
        baselines.size(), options.k, options.inner_k);
    auto suite = eval::run_baseline_suite(rows, target, baselines, options);
    auto ens = eval::run_benchmark(rows, target, ensemble, options);
    write(config.resolve(fmt::format("eval_predictions_{}.csv", eval::to_string(target))),
          eval::format_predictions_csv(ens, provenance(config, "evaluate")), log);
    for (auto& r : suite) reports.push_back(std::move(r));
    reports.push_back(std::move(ens));
  }

  const auto prov = provenance(config, "evaluate");
  std::string text;
  for (const auto& line : prov) text += "# " + line + "\n";
  for (const auto& r : reports) text += "---\n" + eval::format_report(r);
  write(config.resolve("eval_report.txt"), text, log);
  write(config.resolve("metrics.csv"), eval::format_metrics_csv(reports, prov), log);

  const auto table = eval::format_table(reports);
  std::string table_file;
  for (const auto& line : prov) table_file += "# " + line + "\n";
  write(config.resolve("table.txt"), table_file + table, log);
  say(log, "\n{}", table);
}

void cmd_train(const RunConfig& config, Log log) {
  const auto rows = load_features(config);
  const auto ensemble = config.ensemble_config();
  const auto& spec = std::get<eval::EnsembleSpec>(ensemble.model);
  for (const auto target : config.targets) {
    const auto trained = eval::train_ensemble(rows, target, spec, config.eval.inner_k, config.seed);
    std::vector<std::string> extra{fmt::format("target: {}", eval::to_string(target))};
    for (const auto& [name, hp] : trained.chosen) {
      std::string values;
      for (const auto& [key, value] : hp) values += fmt::format(" {}={}", key, value);
      extra.push_back(fmt::format("chosen {}:{}", name, values));
    }
    std::string text;
    for (const auto& line : with(provenance(config, "train"), extra)) text += "# " + line + "\n";
    std::ostringstream body;
    trained.model.save(body);
    write(config.model_path(target), text + body.str(), log);
  }
}

void cmd_predict(const RunConfig& config, Log log) {
  const auto rows = load_features(config);
  learn::Matrix x(rows.size(), features::kNumFeatures);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < features::kNumFeatures; ++j) x(r, j) = rows[r].features[j];
  }
  std::string text;
  for (const auto& line : provenance(config, "predict")) text += "# " + line + "\n";
  text += "participant_id,date,target,probability,label\n";
  for (const auto target : config.targets) {
    const auto model = load_model(config.model_path(target));
    const auto p = rows.empty() ? std::vector<double>{} : model.predict_proba(x);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      text += csv::join_record({rows[r].key.participant_id, format_date(rows[r].key.date),
                                std::string(eval::to_string(target)), csv::format_real(p[r]),
                                learn::hard_label(p[r]) == 1 ? "high" : "low"});
      text += '\n';
    }
  }
  write(config.resolve(config.paths.predictions), text, log);
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidConfig:
      return kExitConfig;
    case ErrorCode::MissingField:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::RatioOutOfUnitInterval:
    case ErrorCode::BadTimestamp:
    case ErrorCode::BadEye:
    case ErrorCode::ScoreOutOfRange:
    case ErrorCode::FileNotFound:
    case ErrorCode::BadHeader:
    case ErrorCode::EmptyFile:
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::AllCellsMissing:
    case ErrorCode::NoReports:
    case ErrorCode::DegenerateLabels:
    case ErrorCode::EmptyMatrix:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::TooFewGroups:
    case ErrorCode::SingleClassDataset:
      return kExitData;
    case ErrorCode::LeakDetected:
    case ErrorCode::InvalidArgument:
      return kExitInternal;
  }
  return kExitInternal;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"MoodPupilar: daily mood prediction from pupil-iris ratio streams", "moodpupilar"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(MOODPUPILAR_VERSION));

  Overrides o;
  bool quiet = false;
  std::string config_path;
  std::string out_dir;
  std::string model;
  std::string features_path;
  std::uint64_t seed = 0;
  auto* config_opt = app.add_option("--config", config_path, "YAML config file, or any output carrying provenance");
  auto* seed_opt = app.add_option("--seed", seed, "Seed; overrides the config");
  auto* out_opt = app.add_option("--out", out_dir, "Directory for relative input and output paths");
  app.add_flag("--quiet", quiet, "Suppress progress output");
  auto* model_opt = app.add_option("--model", model, "Model file prefix (train, predict)");
  auto* features_opt = app.add_option("--features", features_path, "Feature CSV (evaluate, train, predict)");

  app.add_subcommand("simulate", "Generate a synthetic cohort");
  app.add_subcommand("ingest", "Validate input CSVs and report the capture funnel");
  app.add_subcommand("featurize", "Build daily feature rows and join mood labels");
  app.add_subcommand("evaluate", "Grouped cross-validation of baselines and the ensemble");
  app.add_subcommand("train", "Fit the ensemble on all labeled rows");
  app.add_subcommand("predict", "Predict daily labels with a trained ensemble");
  app.add_subcommand("print-config", "Print the fully resolved config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*config_opt) o.config = config_path;
    if (*seed_opt) o.seed = seed;
    if (*out_opt) o.out = out_dir;
    if (*model_opt) o.model = model;
    if (*features_opt) o.features = features_path;
    const auto config = resolve_config(o);
    const Log log = quiet ? nullptr : &out;
    const auto name = app.get_subcommands().front()->get_name();
    if (name == "print-config") {
      out << fmt::format("# config_sha256: {}\n", config_hash(config)) << to_yaml(config);
      return kExitOk;
    }
    say(log, "moodpupilar {} {}: config_sha256 {} seed {}\n", MOODPUPILAR_VERSION, name, config_hash(config),
        config.seed);
    if (name == "simulate") cmd_simulate(config, log);
    if (name == "ingest") cmd_ingest(config, log);
    if (name == "featurize") cmd_featurize(config, log);
    if (name == "evaluate") cmd_evaluate(config, log);
    if (name == "train") cmd_train(config, log);
    if (name == "predict") cmd_predict(config, log);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: Internal: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace moodpupilar::cli
