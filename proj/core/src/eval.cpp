// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "moodpupilar/error.hpp"
#include "moodpupilar/stacking.hpp"

namespace moodpupilar::eval {
namespace {

using learn::GbdtParams;
using learn::Hyperparams;
using learn::LearnerSpec;
using learn::Matrix;

struct Score {
  double mcc = 0.0;
  double ba = 0.0;
};

Score score_predictions(std::span<const int> truth, std::span<const double> probability) {
  std::vector<int> predicted(probability.size());
  std::transform(probability.begin(), probability.end(), predicted.begin(), learn::hard_label);
  const auto cm = confusion(truth, predicted);
  return {mcc(cm), balanced_accuracy(cm).value};
}

/// Higher MCC, then higher BA, then the smaller hyperparameter map.
bool better(const Score& a, const Hyperparams& ha, const Score& b, const Hyperparams& hb) {
  if (a.mcc != b.mcc) return a.mcc > b.mcc;
  if (a.ba != b.ba) return a.ba > b.ba;
  return ha < hb;
}

Dataset subset(const Dataset& d, std::span<const std::size_t> idx) {
  Dataset out;
  out.x = d.x.select_rows(idx);
  out.y = learn::gather<int>(d.y, idx);
  out.groups = learn::gather<ParticipantId>(d.groups, idx);
  out.keys = learn::gather<DayKey>(d.keys, idx);
  return out;
}

bool single_class(std::span<const int> y) {
  return std::all_of(y.begin(), y.end(), [&](int v) { return v == y.front(); });
}

std::size_t distinct_groups(std::span<const ParticipantId> groups) {
  return std::set<ParticipantId>(groups.begin(), groups.end()).size();
}

/// Inner folds never exceed the participants available.
FoldPlan inner_plan_for(std::span<const ParticipantId> groups, int inner_k, std::uint64_t seed) {
  const auto n = static_cast<int>(distinct_groups(groups));
  if (n < 2) {
    throw Error(ErrorCode::TooFewGroups,
                fmt::format("inner cross-validation needs at least 2 participants, got {}", n));
  }
  return make_fold_plan(groups, std::min(inner_k, n), seed);
}

std::vector<LearnerSpec> candidates(const SearchSpace& space) {
  std::vector<LearnerSpec> out;
  if (space.grid.empty()) {
    out.push_back(learn::resolve_spec(space.spec));
    return out;
  }
  for (const auto& point : space.grid) {
    auto spec = space.spec;
    for (const auto& [key, value] : point) spec.hyperparams[key] = value;
    out.push_back(learn::resolve_spec(spec));
  }
  return out;
}

/// Trains and predicts one participant-disjoint split.
class SplitRunner {
 public:
  explicit SplitRunner(std::size_t& counter) : counter_(counter) {}

  RowSplit split(const FoldPlan& plan, std::span<const ParticipantId> groups, int fold) const {
    auto s = split_rows(plan, groups, fold);
    assert_group_disjoint(groups, s);
    ++counter_;
    return s;
  }

  /// Splits asserted elsewhere (inside fit_stacked_grid).
  void add_checked(std::size_t n) const { counter_ += n; }

  std::vector<double> oof(const Dataset& d, const FoldPlan& plan, const learn::FitFn& fit) const {
    counter_ += static_cast<std::size_t>(plan.k);
    return learn::out_of_fold_predict(d.x, d.y, d.groups, plan, fit);
  }

 private:
  std::size_t& counter_;
};

LearnerSpec tune_learner(const Dataset& train, const FoldPlan& plan, const SearchSpace& space,
                         const SplitRunner& runner) {
  const auto specs = candidates(space);
  if (specs.size() == 1) return specs.front();
  std::optional<std::size_t> best;
  Score best_score;
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const auto& spec = specs[c];
    const auto p = runner.oof(train, plan, [&](const Matrix& x, learn::LabelSpan y) {
      return learn::fit_or_constant(spec, x, y);
    });
    const auto s = score_predictions(train.y, p);
    if (!best || better(s, spec.hyperparams, best_score, specs[*best].hyperparams)) {
      best = c;
      best_score = s;
    }
  }
  return specs[*best];
}

std::vector<double> constant_predictions(std::span<const int> y_train, std::size_t n) {
  return std::vector<double>(n, y_train.empty() ? 0.5 : static_cast<double>(y_train.front()));
}

struct FittedFold {
  std::vector<double> probability;
  ChosenParams chosen;
};

FittedFold fit_single(const Dataset& train, const Dataset& test, const FoldPlan& inner, const SearchSpace& space,
                      const SplitRunner& runner) {
  const auto spec = tune_learner(train, inner, space, runner);
  const auto model = learn::fit_or_constant(spec, train.x, train.y);
  return {model->predict_proba(test.x), {{std::string(learn::to_string(spec.kind)), spec.hyperparams}}};
}

std::vector<std::vector<double>> stacked_predictions(const Dataset& train, const Matrix& x_test,
                                                     const std::vector<LearnerSpec>& base,
                                                     std::span<const GbdtParams> meta_grid, std::size_t top_k,
                                                     int inner_k, std::uint64_t seed, const SplitRunner& runner) {
  if (single_class(train.y)) {
    return std::vector<std::vector<double>>(meta_grid.size(), constant_predictions(train.y, x_test.rows()));
  }
  const auto plan_k = std::min(inner_k, static_cast<int>(distinct_groups(train.groups)));
  const auto models = learn::fit_stacked_grid(train.x, train.y, train.groups, base, meta_grid, top_k, plan_k, seed);
  runner.add_checked(base.size() * static_cast<std::size_t>(plan_k));
  std::vector<std::vector<double>> out;
  for (const auto& m : models) out.push_back(m.predict_proba(x_test));
  return out;
}

struct TunedEnsemble {
  std::vector<LearnerSpec> base;
  GbdtParams meta;
  ChosenParams chosen;
};

TunedEnsemble tune_ensemble(const Dataset& train, const FoldPlan& inner, const EnsembleSpec& spec, int inner_k,
                            std::uint64_t seed, const SplitRunner& runner) {
  if (spec.meta_grid.empty()) throw Error(ErrorCode::InvalidConfig, "ensemble meta grid is empty");
  TunedEnsemble out;
  for (const auto& space : spec.base) {
    out.base.push_back(tune_learner(train, inner, space, runner));
    out.chosen.emplace_back(std::string(learn::to_string(out.base.back().kind)), out.base.back().hyperparams);
  }

  std::size_t best = 0;
  if (spec.meta_grid.size() > 1) {
    std::vector<std::vector<double>> oof(spec.meta_grid.size(), std::vector<double>(train.x.rows(), 0.0));
    for (int fold = 0; fold < inner.k; ++fold) {
      const auto s = runner.split(inner, train.groups, fold);
      const auto inner_train = subset(train, s.train);
      const auto p = stacked_predictions(inner_train, train.x.select_rows(s.test), out.base, spec.meta_grid,
                                         spec.top_k, inner_k, derive_seed(seed, 100 + static_cast<std::uint64_t>(fold)),
                                         runner);
      for (std::size_t c = 0; c < p.size(); ++c) {
        for (std::size_t j = 0; j < s.test.size(); ++j) oof[c][s.test[j]] = p[c][j];
      }
    }
    Score best_score = score_predictions(train.y, oof[0]);
    for (std::size_t c = 1; c < oof.size(); ++c) {
      const auto sc = score_predictions(train.y, oof[c]);
      if (better(sc, spec.meta_grid[c].to_hyperparams(), best_score, spec.meta_grid[best].to_hyperparams())) {
        best = c;
        best_score = sc;
      }
    }
  }
  out.meta = spec.meta_grid[best];
  out.chosen.emplace_back("meta", out.meta.to_hyperparams());
  return out;
}

constexpr std::uint64_t kFinalFitTag = 99;

FittedFold fit_ensemble(const Dataset& train, const Dataset& test, const FoldPlan& inner, const EnsembleSpec& spec,
                        int inner_k, std::uint64_t seed, const SplitRunner& runner) {
  auto tuned = tune_ensemble(train, inner, spec, inner_k, seed, runner);
  FittedFold out;
  out.probability = stacked_predictions(train, test.x, tuned.base, std::span(&tuned.meta, 1), spec.top_k, inner_k,
                                        derive_seed(seed, kFinalFitTag), runner)
                        .front();
  out.chosen = std::move(tuned.chosen);
  return out;
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (const double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

void check_options(const EvalOptions& options) {
  if (options.k < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("k must be >= 2, got {}", options.k));
  if (options.inner_k < 2) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("inner_k must be >= 2, got {}", options.inner_k));
  }
}

void check_dataset(const Dataset& d, int k) {
  const auto n = distinct_groups(d.groups);
  if (n < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewGroups,
                fmt::format("{} participants with labeled rows, need at least {}", n, k));
  }
  if (single_class(d.y)) throw Error(ErrorCode::SingleClassDataset, "labeled rows hold a single class");
}

EvalReport evaluate(const Dataset& data, Target target, const ModelConfig& config, const EvalOptions& options) {
  EvalReport report;
  report.model = config.name;
  report.target = target;
  report.seed = options.seed;
  report.k = options.k;
  report.inner_k = options.inner_k;
  report.schema_version = features::FeatureSchema::canonical().version();
  report.n_rows = data.x.rows();
  report.n_participants = distinct_groups(data.groups);
  for (const auto& key : data.keys) {
    if (!report.first_day || key.date < *report.first_day) report.first_day = key.date;
    if (!report.last_day || key.date > *report.last_day) report.last_day = key.date;
  }
  report.outer_plan = make_fold_plan(data.groups, options.k, options.seed);
  const SplitRunner runner(report.splits_checked);

  std::vector<double> fold_ba;
  std::vector<double> fold_mcc;
  for (int fold = 0; fold < options.k; ++fold) {
    const auto split = runner.split(report.outer_plan, data.groups, fold);
    const auto train = subset(data, split.train);
    const auto test = subset(data, split.test);
    const auto fold_seed = derive_seed(options.seed, static_cast<std::uint64_t>(fold) + 1);

    FoldResult result;
    result.fold = fold;
    result.test_participants = report.outer_plan.participants_in(fold);
    result.n_train = split.train.size();
    result.n_test = split.test.size();
    result.inner_plan = inner_plan_for(train.groups, options.inner_k, fold_seed);

    const auto fitted = std::visit(
        [&](const auto& model) {
          using T = std::decay_t<decltype(model)>;
          if constexpr (std::is_same_v<T, SearchSpace>) {
            return fit_single(train, test, result.inner_plan, model, runner);
          } else {
            return fit_ensemble(train, test, result.inner_plan, model, options.inner_k, fold_seed, runner);
          }
        },
        config.model);
    result.chosen = fitted.chosen;

    std::vector<int> predicted(test.y.size());
    for (std::size_t j = 0; j < test.y.size(); ++j) {
      predicted[j] = learn::hard_label(fitted.probability[j]);
      report.predictions.push_back({test.keys[j], fold, test.y[j], fitted.probability[j], predicted[j]});
    }
    result.cm = confusion(test.y, predicted);
    result.ba = balanced_accuracy(result.cm);
    result.mcc = mcc(result.cm);
    report.pooled += result.cm;
    fold_ba.push_back(result.ba.value);
    fold_mcc.push_back(result.mcc);
    report.per_fold.push_back(std::move(result));
  }
  report.pooled_ba = balanced_accuracy(report.pooled);
  report.pooled_mcc = mcc(report.pooled);
  std::tie(report.fold_ba_mean, report.fold_ba_sd) = mean_sd(fold_ba);
  std::tie(report.fold_mcc_mean, report.fold_mcc_sd) = mean_sd(fold_mcc);
  return report;
}

}  // namespace

std::string_view to_string(Target target) noexcept {
  return target == Target::valence ? "valence" : "arousal";
}

std::optional<Target> parse_target(std::string_view text) noexcept {
  if (text == "valence") return Target::valence;
  if (text == "arousal") return Target::arousal;
  return std::nullopt;
}

Dataset make_dataset(std::span<const features::DayFeatureRow> rows, Target target) {
  Dataset d;
  std::vector<std::vector<double>> xs;
  for (const auto& row : rows) {
    const auto& label = target == Target::valence ? row.valence_label : row.arousal_label;
    if (!label) continue;
    xs.emplace_back(row.features.begin(), row.features.end());
    d.y.push_back(static_cast<int>(*label));
    d.groups.push_back(row.key.participant_id);
    d.keys.push_back(row.key);
  }
  d.x = xs.empty() ? Matrix(0, features::kNumFeatures) : Matrix::from_rows(xs);
  return d;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SearchSpace default_search(learn::LearnerKind kind, std::uint64_t seed) {
  return {{kind, {}, derive_seed(seed, 1000 + static_cast<std::uint64_t>(kind))}, learn::default_grid(kind)};
}

std::vector<GbdtParams> default_meta_grid() {
  std::vector<GbdtParams> grid;
  for (const int depth : {2, 3}) {
    for (const int trees : {50, 100}) {
      GbdtParams p;
      p.n_trees = trees;
      p.max_depth = depth;
      grid.push_back(p);
    }
  }
  return grid;
}

ModelConfig default_ensemble_config(std::uint64_t seed) {
  EnsembleSpec spec;
  for (const auto kind : learn::kAllLearnerKinds) spec.base.push_back(default_search(kind, seed));
  spec.meta_grid = default_meta_grid();
  spec.top_k = 10;
  return {std::string(kEnsembleName), std::move(spec)};
}

TrainedEnsemble train_ensemble(std::span<const features::DayFeatureRow> rows, Target target, const EnsembleSpec& spec,
                               int inner_k, std::uint64_t seed) {
  if (inner_k < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("inner_k must be >= 2, got {}", inner_k));
  const auto data = make_dataset(rows, target);
  check_dataset(data, inner_k);
  std::size_t checked = 0;
  const SplitRunner runner(checked);
  TrainedEnsemble out;
  out.tuning_plan = make_fold_plan(data.groups, inner_k, seed);
  auto tuned = tune_ensemble(data, out.tuning_plan, spec, inner_k, seed, runner);
  out.model = learn::fit_stacked(data.x, data.y, data.groups, tuned.base, tuned.meta, spec.top_k, inner_k,
                                 derive_seed(seed, kFinalFitTag));
  out.chosen = std::move(tuned.chosen);
  return out;
}

std::vector<LearnerSpec> default_baseline_specs(std::uint64_t seed) {
  std::vector<LearnerSpec> specs;
  for (const auto kind : learn::kAllLearnerKinds) specs.push_back(default_search(kind, seed).spec);
  return specs;
}

EvalReport run_benchmark(std::span<const features::DayFeatureRow> rows, Target target, const ModelConfig& config,
                         const EvalOptions& options) {
  check_options(options);
  const auto data = make_dataset(rows, target);
  check_dataset(data, options.k);
  return evaluate(data, target, config, options);
}

std::vector<EvalReport> run_baseline_suite(std::span<const features::DayFeatureRow> rows, Target target,
                                           std::span<const LearnerSpec> baseline_specs, const EvalOptions& options) {
  check_options(options);
  std::vector<EvalReport> reports;
  if (baseline_specs.empty()) return reports;
  const auto data = make_dataset(rows, target);
  check_dataset(data, options.k);
  for (const auto& spec : baseline_specs) {
    const ModelConfig config{std::string(learn::to_string(spec.kind)), SearchSpace{spec, learn::default_grid(spec.kind)}};
    reports.push_back(evaluate(data, target, config, options));
  }
  return reports;
}

}  // namespace moodpupilar::eval
