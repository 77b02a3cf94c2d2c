// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/report.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>

#include <fmt/format.h>

#include "moodpupilar/csv.hpp"

namespace moodpupilar::eval {
namespace {

void put_comments(std::string& out, std::span<const std::string> comments) {
  for (const auto& c : comments) out += fmt::format("# {}\n", c);
}

std::string format_hyperparams(const learn::Hyperparams& hp) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : hp) {
    out += fmt::format("{}{}: {}", first ? "" : ", ", key, csv::format_real(value));
    first = false;
  }
  return out + "}";
}

std::string format_cm(const ConfusionMatrix& cm) {
  return fmt::format("{{tp: {}, fp: {}, tn: {}, fn: {}}}", cm.tp, cm.fp, cm.tn, cm.fn);
}

std::string format_plan(const FoldPlan& plan) {
  std::string out = fmt::format("{{k: {}, seed: {}, folds: [", plan.k, plan.seed);
  for (int f = 0; f < plan.k; ++f) {
    const auto members = plan.participants_in(f);
    out += f == 0 ? "[" : ", [";
    for (std::size_t i = 0; i < members.size(); ++i) out += (i ? ", " : "") + members[i];
    out += "]";
  }
  return out + "]}";
}

}  // namespace

std::string format_report(const EvalReport& r, std::span<const std::string> comments) {
  std::string out;
  put_comments(out, comments);
  out += fmt::format("model: {}\n", r.model);
  out += fmt::format("target: {}\n", to_string(r.target));
  out += fmt::format("schema_version: {}\n", r.schema_version);
  out += fmt::format("seed: {}\n", r.seed);
  out += fmt::format("k: {}\ninner_k: {}\n", r.k, r.inner_k);
  out += fmt::format("data_first_day: {}\n", r.first_day ? format_date(*r.first_day) : "-");
  out += fmt::format("data_last_day: {}\n", r.last_day ? format_date(*r.last_day) : "-");
  out += fmt::format("rows: {}\nparticipants: {}\n", r.n_rows, r.n_participants);
  out += fmt::format("splits_checked: {}\n", r.splits_checked);
  out += fmt::format("outer_plan: {}\n", format_plan(r.outer_plan));
  out += "pooled:\n";
  out += fmt::format("  ba: {}\n", csv::format_real(r.pooled_ba.value));
  out += fmt::format("  ba_degenerate: {}\n", r.pooled_ba.degenerate);
  out += fmt::format("  mcc: {}\n", csv::format_real(r.pooled_mcc));
  out += fmt::format("  confusion: {}\n", format_cm(r.pooled));
  out += "fold_summary:\n";
  out += fmt::format("  ba_mean: {}\n  ba_sd: {}\n", csv::format_real(r.fold_ba_mean), csv::format_real(r.fold_ba_sd));
  out += fmt::format("  mcc_mean: {}\n  mcc_sd: {}\n", csv::format_real(r.fold_mcc_mean),
                     csv::format_real(r.fold_mcc_sd));
  out += "per_fold:\n";
  for (const auto& f : r.per_fold) {
    out += fmt::format("  - fold: {}\n", f.fold);
    out += fmt::format("    n_train: {}\n    n_test: {}\n", f.n_train, f.n_test);
    out += fmt::format("    ba: {}\n", csv::format_real(f.ba.value));
    out += fmt::format("    ba_degenerate: {}\n", f.ba.degenerate);
    out += fmt::format("    mcc: {}\n", csv::format_real(f.mcc));
    out += fmt::format("    confusion: {}\n", format_cm(f.cm));
    out += fmt::format("    inner_plan: {}\n", format_plan(f.inner_plan));
    out += "    chosen:\n";
    for (const auto& [name, hp] : f.chosen) out += fmt::format("      {}: {}\n", name, format_hyperparams(hp));
  }
  return out;
}

std::string format_metrics_csv(std::span<const EvalReport> reports, std::span<const std::string> comments) {
  std::string out;
  put_comments(out, comments);
  out += kMetricsHeader;
  out += '\n';
  const auto row = [&](const EvalReport& r, const std::string& fold, double ba, double m, const ConfusionMatrix& cm) {
    out += csv::join_record({r.model, std::string(to_string(r.target)), fold, csv::format_real(ba),
                             csv::format_real(m), std::to_string(cm.tp), std::to_string(cm.fp), std::to_string(cm.tn),
                             std::to_string(cm.fn)});
    out += '\n';
  };
  for (const auto& r : reports) {
    for (const auto& f : r.per_fold) row(r, std::to_string(f.fold), f.ba.value, f.mcc, f.cm);
    row(r, "pooled", r.pooled_ba.value, r.pooled_mcc, r.pooled);
  }
  return out;
}

std::string format_predictions_csv(const EvalReport& r, std::span<const std::string> comments) {
  std::string out;
  put_comments(out, comments);
  out += "participant_id,date,fold,truth,probability,predicted\n";
  for (const auto& p : r.predictions) {
    out += csv::join_record({p.key.participant_id, format_date(p.key.date), std::to_string(p.fold),
                             std::to_string(p.truth), csv::format_real(p.probability), std::to_string(p.predicted)});
    out += '\n';
  }
  return out;
}

std::string format_table(std::span<const EvalReport> reports) {
  std::vector<std::string> models;
  std::map<std::pair<std::string, Target>, const EvalReport*> cells;
  for (const auto& r : reports) {
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
    cells[{r.model, r.target}] = &r;
  }
  std::size_t width = 5;
  for (const auto& m : models) width = std::max(width, m.size());

  const auto cell = [&](const std::string& model, Target t, bool want_mcc) -> std::string {
    const auto it = cells.find({model, t});
    if (it == cells.end()) return "-";
    return fmt::format("{:.2f}", want_mcc ? it->second->pooled_mcc : it->second->pooled_ba.value);
  };

  std::string out;
  out += fmt::format("{:<{}}  {:>15}  {:>15}\n", "", width, "Valence", "Arousal");
  out += fmt::format("{:<{}}  {:>7} {:>7}  {:>7} {:>7}\n", "Model", width, "BA", "MCC", "BA", "MCC");
  out += std::string(width + 36, '-') + '\n';
  for (const auto& m : models) {
    out += fmt::format("{:<{}}  {:>7} {:>7}  {:>7} {:>7}\n", m, width, cell(m, Target::valence, false),
                       cell(m, Target::valence, true), cell(m, Target::arousal, false), cell(m, Target::arousal, true));
  }
  out += std::string(width + 36, '-') + '\n';
  out += fmt::format("reference ({}, published cohort): valence BA {:.2f} MCC {:.2f}, arousal BA {:.2f} MCC {:.2f}\n",
                     kEnsembleName, kReferenceScores.valence_ba, kReferenceScores.valence_mcc,
                     kReferenceScores.arousal_ba, kReferenceScores.arousal_mcc);
  return out;
}

}  // namespace moodpupilar::eval
