// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/cli/config.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>

#include <fmt/format.h>
#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "moodpupilar/csv.hpp"
#include "moodpupilar/error.hpp"

namespace moodpupilar::cli {
namespace {

using learn::Hyperparams;
using learn::LearnerKind;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, fmt::format("{}: {}", where, what));
}

void check_map(const YAML::Node& node, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& item : node) {
    const auto key = item.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(where, fmt::format("unknown key '{}'", key));
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, fmt::format("cannot read '{}'", node.Scalar()));
  }
}

template <class T>
void read(const YAML::Node& map, std::string_view key, T& target, const std::string& where) {
  if (const auto node = map[std::string(key)]) target = scalar<T>(node, fmt::format("{}.{}", where, key));
}

void read_path(const YAML::Node& map, std::string_view key, std::filesystem::path& target, const std::string& where) {
  if (const auto node = map[std::string(key)]) target = scalar<std::string>(node, fmt::format("{}.{}", where, key));
}

LearnerKind kind_of(const std::string& text, const std::string& where) {
  const auto kind = learn::parse_learner_kind(text);
  if (!kind) fail(where, fmt::format("unknown learner '{}'", text));
  return *kind;
}

Hyperparams hyperparams(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) fail(where, "expected a mapping of hyperparameters");
  Hyperparams hp;
  for (const auto& item : node) {
    const auto key = item.first.as<std::string>();
    hp[key] = scalar<double>(item.second, fmt::format("{}.{}", where, key));
  }
  return hp;
}

std::vector<Hyperparams> grid(const YAML::Node& node, LearnerKind kind, const std::string& where) {
  if (!node.IsSequence()) fail(where, "expected a list of hyperparameter mappings");
  std::vector<Hyperparams> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const auto here = fmt::format("{}[{}]", where, i);
    auto hp = hyperparams(node[i], here);
    try {
      learn::resolve_spec({kind, hp, 0});
    } catch (const Error& e) {
      fail(here, e.what());
    }
    out.push_back(std::move(hp));
  }
  return out;
}

void parse_paths(const YAML::Node& node, Paths& p) {
  const std::string where = "paths";
  check_map(node, where,
            {"out_dir", "pir_events", "mood_reports", "truth_labels", "features", "model_prefix", "predictions"});
  read_path(node, "out_dir", p.out_dir, where);
  read_path(node, "pir_events", p.pir_events, where);
  read_path(node, "mood_reports", p.mood_reports, where);
  read_path(node, "truth_labels", p.truth_labels, where);
  read_path(node, "features", p.features, where);
  read_path(node, "model_prefix", p.model_prefix, where);
  read_path(node, "predictions", p.predictions, where);
}

void parse_features(const YAML::Node& node, features::FeaturizeOptions& f) {
  const std::string where = "features";
  check_map(node, where, {"period_boundaries", "imputation"});
  if (const auto b = node["period_boundaries"]) {
    if (!b.IsSequence() || b.size() != 3) fail(where + ".period_boundaries", "expected three hours");
    f.boundaries.morning_start = scalar<int>(b[0], where + ".period_boundaries[0]");
    f.boundaries.afternoon_start = scalar<int>(b[1], where + ".period_boundaries[1]");
    f.boundaries.evening_start = scalar<int>(b[2], where + ".period_boundaries[2]");
    try {
      f.boundaries.validate();
    } catch (const Error& e) {
      fail(where + ".period_boundaries", e.what());
    }
  }
  if (const auto p = node["imputation"]) {
    const auto text = scalar<std::string>(p, where + ".imputation");
    const auto policy = features::parse_imputation_policy(text);
    if (!policy) fail(where + ".imputation", fmt::format("unknown policy '{}'", text));
    f.policy = *policy;
  }
}

void parse_model(const YAML::Node& node, ModelSection& m) {
  const std::string where = "model";
  check_map(node, where, {"base_learners", "grids", "meta_grid", "top_k"});
  if (const auto b = node["base_learners"]) {
    if (!b.IsSequence() || b.size() == 0) fail(where + ".base_learners", "expected a non-empty list");
    m.base_learners.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      m.base_learners.push_back(kind_of(scalar<std::string>(b[i], where + ".base_learners"), where + ".base_learners"));
    }
  }
  if (const auto g = node["grids"]) {
    if (!g.IsMap()) fail(where + ".grids", "expected a mapping from learner to grid");
    for (const auto& item : g) {
      const auto name = item.first.as<std::string>();
      const auto kind = kind_of(name, where + ".grids");
      m.grids[kind] = grid(item.second, kind, fmt::format("{}.grids.{}", where, name));
    }
  }
  if (const auto mg = node["meta_grid"]) {
    const auto points = grid(mg, LearnerKind::gbdt, where + ".meta_grid");
    if (points.empty()) fail(where + ".meta_grid", "expected at least one point");
    m.meta_grid.clear();
    for (const auto& hp : points) m.meta_grid.push_back(learn::GbdtParams::from_hyperparams(hp));
  }
  if (const auto k = node["top_k"]) {
    const auto v = scalar<long long>(k, where + ".top_k");
    if (v < 0) fail(where + ".top_k", "must be >= 0");
    m.top_k = static_cast<std::size_t>(v);
  }
}

void parse_eval(const YAML::Node& node, EvalSection& e) {
  const std::string where = "eval";
  check_map(node, where, {"k", "inner_k"});
  read(node, "k", e.k, where);
  read(node, "inner_k", e.inner_k, where);
  if (e.k < 2) fail(where + ".k", "must be >= 2");
  if (e.inner_k < 2) fail(where + ".inner_k", "must be >= 2");
}

void parse_simulate(const YAML::Node& node, simgen::CohortConfig& c) {
  const std::string where = "simulate";
  check_map(node, where,
            {"n_participants", "n_days", "sessions_per_day_mean", "reports_per_day", "effect_beta", "arousal_beta",
             "baseline_pir_mean", "baseline_pir_sd", "diurnal_amplitude", "noise_sd", "missing_day_prob",
             "report_noise_sd", "night_session_fraction", "start_date"});
  read(node, "n_participants", c.n_participants, where);
  read(node, "n_days", c.n_days, where);
  read(node, "sessions_per_day_mean", c.sessions_per_day_mean, where);
  read(node, "reports_per_day", c.reports_per_day, where);
  read(node, "effect_beta", c.effect_beta, where);
  read(node, "arousal_beta", c.arousal_beta, where);
  read(node, "baseline_pir_mean", c.baseline_pir_mean, where);
  read(node, "baseline_pir_sd", c.baseline_pir_sd, where);
  read(node, "diurnal_amplitude", c.diurnal_amplitude, where);
  read(node, "noise_sd", c.noise_sd, where);
  read(node, "missing_day_prob", c.missing_day_prob, where);
  read(node, "report_noise_sd", c.report_noise_sd, where);
  read(node, "night_session_fraction", c.night_session_fraction, where);
  if (const auto d = node["start_date"]) {
    const auto text = scalar<std::string>(d, where + ".start_date");
    const auto date = parse_date(text);
    if (!date) fail(where + ".start_date", fmt::format("bad date '{}'", text));
    c.start_date = *date;
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

std::string real(double v) { return fmt::format("{}", v); }

std::string flow_map(const Hyperparams& hp) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : hp) {
    out += fmt::format("{}{}: {}", first ? "" : ", ", key, real(value));
    first = false;
  }
  return out + "}";
}

/// Text with provenance lines, if any, reduced to the embedded config.
std::string embedded_or_self(std::string_view text) {
  std::string embedded;
  bool found = false;
  for (const auto& line : csv::split_lines(text)) {
    if (line.starts_with(kConfigPrefix)) {
      embedded += line.substr(kConfigPrefix.size());
      embedded += '\n';
      found = true;
    }
  }
  return found ? embedded : std::string(text);
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.model.base_learners.assign(std::begin(learn::kAllLearnerKinds), std::end(learn::kAllLearnerKinds));
  c.model.meta_grid = eval::default_meta_grid();
  return c;
}

eval::ModelConfig RunConfig::ensemble_config() const {
  eval::EnsembleSpec spec;
  for (const auto kind : model.base_learners) {
    auto space = eval::default_search(kind, seed);
    if (const auto it = model.grids.find(kind); it != model.grids.end()) space.grid = it->second;
    spec.base.push_back(std::move(space));
  }
  spec.meta_grid = model.meta_grid;
  spec.top_k = model.top_k;
  return {std::string(eval::kEnsembleName), std::move(spec)};
}

std::vector<learn::LearnerSpec> RunConfig::baseline_specs() const { return eval::default_baseline_specs(seed); }

eval::EvalOptions RunConfig::eval_options() const { return {eval.k, eval.inner_k, seed}; }

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : paths.out_dir / p;
}

std::filesystem::path RunConfig::model_path(eval::Target target) const {
  auto name = paths.model_prefix;
  name += fmt::format("_{}.txt", eval::to_string(target));
  return resolve(name);
}

RunConfig parse_config(std::string_view text) {
  RunConfig c = default_config();
  YAML::Node root;
  try {
    root = YAML::Load(embedded_or_self(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("config is not valid YAML: {}", e.what()));
  }
  if (!root || root.IsNull()) {
    c.simulate.seed = c.seed;
    return c;
  }
  check_map(root, "config",
            {"seed", "paths", "pir_range", "features", "targets", "model", "eval", "simulate"});
  read(root, "seed", c.seed, "config");
  if (const auto n = root["paths"]) parse_paths(n, c.paths);
  if (const auto n = root["pir_range"]) {
    check_map(n, "pir_range", {"lo", "hi"});
    double lo = c.pir_range.lo();
    double hi = c.pir_range.hi();
    read(n, "lo", lo, "pir_range");
    read(n, "hi", hi, "pir_range");
    c.pir_range = PirRange(lo, hi);
  }
  if (const auto n = root["features"]) parse_features(n, c.features);
  if (const auto n = root["targets"]) {
    if (!n.IsSequence() || n.size() == 0) fail("targets", "expected a non-empty list");
    c.targets.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      const auto text = scalar<std::string>(n[i], "targets");
      const auto t = eval::parse_target(text);
      if (!t) fail("targets", fmt::format("unknown target '{}'", text));
      if (std::find(c.targets.begin(), c.targets.end(), *t) == c.targets.end()) c.targets.push_back(*t);
    }
  }
  if (const auto n = root["model"]) parse_model(n, c.model);
  if (const auto n = root["eval"]) parse_eval(n, c.eval);
  if (const auto n = root["simulate"]) {
    if (n["seed"]) fail("simulate", "the cohort seed is the top-level 'seed'");
    parse_simulate(n, c.simulate);
  }
  c.simulate.seed = c.seed;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(csv::read_file(path)); }

std::string to_yaml(const RunConfig& c) {
  std::string out;
  out += fmt::format("seed: {}\n", c.seed);
  out += "paths:\n";
  out += fmt::format("  pir_events: \"{}\"\n", c.paths.pir_events.string());
  out += fmt::format("  mood_reports: \"{}\"\n", c.paths.mood_reports.string());
  out += fmt::format("  truth_labels: \"{}\"\n", c.paths.truth_labels.string());
  out += fmt::format("  features: \"{}\"\n", c.paths.features.string());
  out += fmt::format("  model_prefix: \"{}\"\n", c.paths.model_prefix.string());
  out += fmt::format("  predictions: \"{}\"\n", c.paths.predictions.string());
  out += fmt::format("pir_range: {{lo: {}, hi: {}}}\n", real(c.pir_range.lo()), real(c.pir_range.hi()));
  out += "features:\n";
  out += fmt::format("  period_boundaries: [{}, {}, {}]\n", c.features.boundaries.morning_start,
                     c.features.boundaries.afternoon_start, c.features.boundaries.evening_start);
  out += fmt::format("  imputation: {}\n", features::to_string(c.features.policy));
  out += "targets: [";
  for (std::size_t i = 0; i < c.targets.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", eval::to_string(c.targets[i]));
  out += "]\n";
  out += "model:\n";
  out += "  base_learners: [";
  for (std::size_t i = 0; i < c.model.base_learners.size(); ++i) {
    out += fmt::format("{}{}", i ? ", " : "", learn::to_string(c.model.base_learners[i]));
  }
  out += "]\n";
  out += "  grids:\n";
  for (const auto kind : c.model.base_learners) {
    const auto it = c.model.grids.find(kind);
    const auto& points = it != c.model.grids.end() ? it->second : learn::default_grid(kind);
    out += fmt::format("    {}:\n", learn::to_string(kind));
    for (const auto& hp : points) out += fmt::format("      - {}\n", flow_map(hp));
  }
  out += "  meta_grid:\n";
  for (const auto& p : c.model.meta_grid) out += fmt::format("    - {}\n", flow_map(p.to_hyperparams()));
  out += fmt::format("  top_k: {}\n", c.model.top_k);
  out += "eval:\n";
  out += fmt::format("  k: {}\n  inner_k: {}\n", c.eval.k, c.eval.inner_k);
  const auto& s = c.simulate;
  out += "simulate:\n";
  out += fmt::format("  n_participants: {}\n", s.n_participants);
  out += fmt::format("  n_days: {}\n", s.n_days);
  out += fmt::format("  sessions_per_day_mean: {}\n", real(s.sessions_per_day_mean));
  out += fmt::format("  reports_per_day: {}\n", s.reports_per_day);
  out += fmt::format("  effect_beta: {}\n", real(s.effect_beta));
  out += fmt::format("  arousal_beta: {}\n", real(s.arousal_beta));
  out += fmt::format("  baseline_pir_mean: {}\n", real(s.baseline_pir_mean));
  out += fmt::format("  baseline_pir_sd: {}\n", real(s.baseline_pir_sd));
  out += fmt::format("  diurnal_amplitude: {}\n", real(s.diurnal_amplitude));
  out += fmt::format("  noise_sd: {}\n", real(s.noise_sd));
  out += fmt::format("  missing_day_prob: {}\n", real(s.missing_day_prob));
  out += fmt::format("  report_noise_sd: {}\n", real(s.report_noise_sd));
  out += fmt::format("  night_session_fraction: {}\n", real(s.night_session_fraction));
  out += fmt::format("  start_date: \"{}\"\n", format_date(s.start_date));
  return out;
}

std::string config_hash(const RunConfig& config) {
  const auto text = to_yaml(config);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "SHA-256 computation failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::vector<std::string> provenance(const RunConfig& config, std::string_view artifact) {
  std::vector<std::string> lines;
  lines.push_back(fmt::format("moodpupilar {} {}", MOODPUPILAR_VERSION, artifact));
  lines.push_back(fmt::format("config_sha256: {}", config_hash(config)));
  lines.push_back(fmt::format("seed: {}", config.seed));
  for (const auto& line : csv::split_lines(to_yaml(config))) {
    if (!line.empty()) lines.push_back(fmt::format("config | {}", line));
  }
  return lines;
}

}  // namespace moodpupilar::cli
