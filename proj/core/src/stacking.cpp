// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/stacking.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "model_io.hpp"

namespace moodpupilar::learn {
namespace {

constexpr std::string_view kEnsembleMagic = "moodpupilar-ensemble";
constexpr int kEnsembleVersion = 1;

}  // namespace

std::vector<double> out_of_fold_predict(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                                        const eval::FoldPlan& plan, const FitFn& fit) {
  if (groups.size() != x.rows() || y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "groups, labels and rows must have the same length");
  }
  std::vector<double> oof(x.rows(), 0.0);
  for (int fold = 0; fold < plan.k; ++fold) {
    const auto split = eval::split_rows(plan, groups, fold);
    if (split.test.empty()) continue;
    eval::assert_group_disjoint(groups, split);
    const Matrix x_train = x.select_rows(split.train);
    const auto y_train = gather<int>(y, split.train);
    const auto model = fit(x_train, y_train);
    const auto p = model->predict_proba(x.select_rows(split.test));
    for (std::size_t j = 0; j < split.test.size(); ++j) oof[split.test[j]] = p[j];
  }
  return oof;
}

ClassifierPtr fit_or_constant(const LearnerSpec& spec, const Matrix& x, LabelSpan y) {
  if (x.empty()) throw Error(ErrorCode::EmptyMatrix, "cannot fit on an empty matrix");
  const auto positives = std::count(y.begin(), y.end(), 1);
  if (positives == 0 || static_cast<std::size_t>(positives) == y.size()) {
    resolve_spec(spec);
    return make_constant_classifier(spec.kind, x.cols(), positives == 0 ? 0.0 : 1.0);
  }
  return fit_learner(spec, x, y);
}

Matrix StackedEnsemble::meta_inputs(const Matrix& x) const {
  if (x.cols() != n_features_) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("ensemble expects {} features, got {}", n_features_, x.cols()));
  }
  Matrix base(x.rows(), base_models_.size());
  for (std::size_t b = 0; b < base_models_.size(); ++b) {
    const auto p = base_models_[b]->predict_proba(x);
    for (std::size_t r = 0; r < x.rows(); ++r) base(r, b) = p[r];
  }
  return base.hconcat(x.select_cols(selected_features_));
}

std::vector<double> StackedEnsemble::predict_proba(const Matrix& x) const {
  return meta_.predict_proba(meta_inputs(x));
}

std::vector<StackedEnsemble> fit_stacked_grid(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                                              const std::vector<LearnerSpec>& base_specs,
                                              std::span<const GbdtParams> meta_grid, std::size_t top_k, int inner_k,
                                              std::uint64_t seed) {
  if (inner_k < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("inner_k must be >= 2, got {}", inner_k));
  if (x.empty()) throw Error(ErrorCode::EmptyMatrix, "cannot fit an ensemble on an empty matrix");
  if (y.size() != x.rows() || groups.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "groups, labels and rows must have the same length");
  }
  for (const auto& params : meta_grid) params.validate();

  std::vector<LearnerSpec> specs;
  for (const auto& spec : base_specs) specs.push_back(resolve_spec(spec));
  const auto plan = eval::make_fold_plan(groups, inner_k, seed);

  Matrix oof(x.rows(), specs.size());
  for (std::size_t b = 0; b < specs.size(); ++b) {
    const auto& spec = specs[b];
    const auto column = out_of_fold_predict(x, y, groups, plan,
                                            [&](const Matrix& xt, LabelSpan yt) { return fit_or_constant(spec, xt, yt); });
    for (std::size_t r = 0; r < x.rows(); ++r) oof(r, b) = column[r];
  }
  std::vector<ClassifierPtr> refits;
  for (const auto& spec : specs) refits.push_back(fit_or_constant(spec, x, y));

  std::vector<StackedEnsemble> models;
  models.reserve(meta_grid.size());
  for (const auto& params : meta_grid) {
    StackedEnsemble model;
    model.n_features_ = x.cols();
    model.meta_params_ = params;
    model.base_specs_ = specs;
    model.base_models_ = refits;
    model.oof_plan_ = plan;
    model.oof_ = oof;
    model.selected_features_ = select_features(x, y, params, top_k);
    model.meta_ = fit_gbdt(oof.hconcat(x.select_cols(model.selected_features_)), y, params);
    models.push_back(std::move(model));
  }
  return models;
}

StackedEnsemble fit_stacked(const Matrix& x, LabelSpan y, std::span<const ParticipantId> groups,
                            const std::vector<LearnerSpec>& base_specs, const GbdtParams& meta_params,
                            std::size_t top_k, int inner_k, std::uint64_t seed) {
  auto models = fit_stacked_grid(x, y, groups, base_specs, std::span(&meta_params, 1), top_k, inner_k, seed);
  return std::move(models.front());
}

std::vector<double> predict_stacked(const StackedEnsemble& model, const Matrix& x) { return model.predict_proba(x); }

void StackedEnsemble::save(std::ostream& out) const {
  out << kEnsembleMagic << ' ' << kEnsembleVersion << '\n';
  io::put_int(out, "n_features", n_features_);
  io::put_int(out, "inner_k", oof_plan_.k);
  io::put_int(out, "plan_seed", oof_plan_.seed);
  io::put_int(out, "plan_size", oof_plan_.assignment.size());
  for (const auto& [pid, fold] : oof_plan_.assignment) out << "assign " << std::quoted(pid) << ' ' << fold << '\n';
  out << "selected " << selected_features_.size();
  for (const auto i : selected_features_) out << ' ' << i;
  out << '\n';
  out << "meta_params";
  for (const auto& [key, value] : meta_params_.to_hyperparams()) out << ' ' << key << ' ' << csv::format_real(value);
  out << '\n';
  io::put_int(out, "n_base", base_specs_.size());
  for (std::size_t b = 0; b < base_specs_.size(); ++b) {
    const auto& spec = base_specs_[b];
    out << "base " << to_string(spec.kind) << ' ' << spec.seed << ' ' << spec.hyperparams.size();
    for (const auto& [key, value] : spec.hyperparams) out << ' ' << key << ' ' << csv::format_real(value);
    out << '\n';
    save_classifier(*base_models_[b], out);
  }
  out << "meta\n";
  save_classifier(meta_, out);
  out << "end_ensemble\n";
}

StackedEnsemble StackedEnsemble::load(std::istream& in) {
  io::expect(in, kEnsembleMagic);
  const auto version = io::get_int_token(in);
  if (version != kEnsembleVersion) {
    throw Error(ErrorCode::ParseError, fmt::format("unsupported ensemble format version {}", version));
  }
  StackedEnsemble m;
  m.n_features_ = static_cast<std::size_t>(io::get_int(in, "n_features"));
  m.oof_plan_.k = static_cast<int>(io::get_int(in, "inner_k"));
  io::expect(in, "plan_seed");
  m.oof_plan_.seed = io::get_uint_token(in);
  const auto plan_size = io::get_int(in, "plan_size");
  for (long long i = 0; i < plan_size; ++i) {
    io::expect(in, "assign");
    std::string pid;
    if (!(in >> std::quoted(pid))) throw Error(ErrorCode::ParseError, "bad participant id in model document");
    m.oof_plan_.assignment[pid] = static_cast<int>(io::get_int_token(in));
  }
  const auto n_selected = io::get_int(in, "selected");
  for (long long i = 0; i < n_selected; ++i) {
    const auto idx = io::get_int_token(in);
    if (idx < 0 || static_cast<std::size_t>(idx) >= m.n_features_) {
      throw Error(ErrorCode::ParseError, "selected feature index out of range");
    }
    m.selected_features_.push_back(static_cast<std::size_t>(idx));
  }
  io::expect(in, "meta_params");
  Hyperparams meta_hp;
  for (std::size_t i = 0; i < GbdtParams{}.to_hyperparams().size(); ++i) {
    const auto key = io::next_token(in);
    meta_hp[key] = io::get_real_token(in);
  }
  m.meta_params_ = GbdtParams::from_hyperparams(meta_hp);
  const auto n_base = io::get_int(in, "n_base");
  for (long long b = 0; b < n_base; ++b) {
    io::expect(in, "base");
    LearnerSpec spec;
    const auto kind_token = io::next_token(in);
    const auto kind = parse_learner_kind(kind_token);
    if (!kind) throw Error(ErrorCode::ParseError, fmt::format("unknown learner '{}'", kind_token));
    spec.kind = *kind;
    spec.seed = io::get_uint_token(in);
    const auto n_hp = io::get_int_token(in);
    for (long long i = 0; i < n_hp; ++i) {
      const auto key = io::next_token(in);
      spec.hyperparams[key] = io::get_real_token(in);
    }
    m.base_specs_.push_back(std::move(spec));
    auto model = load_classifier(in);
    if (model->n_features() != m.n_features_) throw Error(ErrorCode::ParseError, "base model dimension mismatch");
    m.base_models_.push_back(std::move(model));
  }
  io::expect(in, "meta");
  auto meta = load_classifier(in);
  const auto* gbdt = dynamic_cast<const GbdtModel*>(meta.get());
  if (gbdt == nullptr) throw Error(ErrorCode::ParseError, "meta learner must be a GBDT");
  m.meta_ = *gbdt;
  if (m.meta_.n_features() != m.meta_input_dim()) throw Error(ErrorCode::ParseError, "meta model dimension mismatch");
  io::expect(in, "end_ensemble");
  return m;
}

}  // namespace moodpupilar::learn
