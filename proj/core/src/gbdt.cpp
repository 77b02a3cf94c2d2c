// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "moodpupilar/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "model_io.hpp"

namespace moodpupilar::learn {
namespace {

constexpr double kProbEps = 1e-15;
constexpr int kMaxLineSearchHalvings = 30;

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double mean_loss(std::span<const double> scores, LabelSpan y) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) total += softplus(y[i] == 1 ? -scores[i] : scores[i]);
  return total / static_cast<double>(scores.size());
}

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, const std::vector<std::vector<std::size_t>>& sorted, const GbdtParams& params)
      : x_(x), sorted_(sorted), params_(params), in_node_(x.rows(), 0) {}

  struct Result {
    RegressionTree tree;
    std::vector<int> leaf_of;  // node index per training sample
    std::vector<std::pair<int, double>> splits;  // (feature, gain)
  };

  Result grow(std::span<const double> g, std::span<const double> h) {
    Result result;
    result.leaf_of.assign(x_.rows(), 0);
    std::vector<std::size_t> all(x_.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    result.tree.nodes.emplace_back();
    grow_node(result, 0, all, 0, g, h);
    return result;
  }

 private:
  double leaf_weight(double g_sum, double h_sum) const {
    const double denom = h_sum + params_.l2_lambda;
    return denom > 1e-300 ? -g_sum / denom : 0.0;
  }

  double score(double g_sum, double h_sum) const {
    const double denom = h_sum + params_.l2_lambda;
    return denom > 1e-300 ? g_sum * g_sum / denom : 0.0;
  }

  SplitCandidate best_split(const std::vector<std::size_t>& samples, double g_total, double h_total,
                            std::span<const double> g, std::span<const double> h) {
    SplitCandidate best;
    const std::size_t n = samples.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (n < 2 * min_leaf) return best;
    for (const std::size_t i : samples) in_node_[i] = 1;
    const double parent = score(g_total, h_total);
    for (std::size_t f = 0; f < x_.cols(); ++f) {
      double gl = 0.0;
      double hl = 0.0;
      std::size_t count = 0;
      std::size_t prev = 0;
      bool have_prev = false;
      for (const std::size_t i : sorted_[f]) {
        if (!in_node_[i]) continue;
        if (have_prev && count >= min_leaf && n - count >= min_leaf && x_(i, f) != x_(prev, f)) {
          const double gain =
              0.5 * (score(gl, hl) + score(g_total - gl, h_total - hl) - parent) - params_.gain_gamma;
          if (gain > best.gain) {
            best.gain = gain;
            best.feature = static_cast<int>(f);
            best.threshold = x_(prev, f);
          }
        }
        gl += g[i];
        hl += h[i];
        ++count;
        prev = i;
        have_prev = true;
      }
    }
    for (const std::size_t i : samples) in_node_[i] = 0;
    return best;
  }

  void grow_node(Result& result, int node, const std::vector<std::size_t>& samples, int depth,
                 std::span<const double> g, std::span<const double> h) {
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (const std::size_t i : samples) {
      g_sum += g[i];
      h_sum += h[i];
    }
    SplitCandidate split;
    if (depth < params_.max_depth) split = best_split(samples, g_sum, h_sum, g, h);
    if (split.feature < 0) {
      result.tree.nodes[static_cast<std::size_t>(node)].value = leaf_weight(g_sum, h_sum);
      for (const std::size_t i : samples) result.leaf_of[i] = node;
      return;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const std::size_t i : samples) {
      (x_(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(i);
    }
    result.splits.emplace_back(split.feature, split.gain);
    const int left_id = static_cast<int>(result.tree.nodes.size());
    const int right_id = left_id + 1;
    result.tree.nodes.emplace_back();
    result.tree.nodes.emplace_back();
    auto& n = result.tree.nodes[static_cast<std::size_t>(node)];
    n.feature = split.feature;
    n.threshold = split.threshold;
    n.left = left_id;
    n.right = right_id;
    grow_node(result, left_id, left, depth + 1, g, h);
    grow_node(result, right_id, right, depth + 1, g, h);
  }

  const Matrix& x_;
  const std::vector<std::vector<std::size_t>>& sorted_;
  const GbdtParams& params_;
  std::vector<char> in_node_;
};

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_loss(std::span<const double> probabilities, LabelSpan y) {
  if (probabilities.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double p = std::clamp(probabilities[i], kProbEps, 1.0 - kProbEps);
    total -= y[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(probabilities.size());
}

void GbdtParams::validate() const {
  if (n_trees < 0 || !(learning_rate > 0.0) || !std::isfinite(learning_rate) || max_depth < 1 ||
      min_samples_leaf < 1 || !(l2_lambda >= 0.0) || !(gain_gamma >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("invalid GBDT parameters: n_trees={} learning_rate={} max_depth={} "
                            "min_samples_leaf={} l2_lambda={} gain_gamma={}",
                            n_trees, learning_rate, max_depth, min_samples_leaf, l2_lambda, gain_gamma));
  }
}

GbdtParams GbdtParams::from_hyperparams(const Hyperparams& hp) {
  GbdtParams p;
  auto get = [&](const char* key, double fallback) {
    const auto it = hp.find(key);
    return it == hp.end() ? fallback : it->second;
  };
  p.n_trees = static_cast<int>(get("n_trees", p.n_trees));
  p.learning_rate = get("learning_rate", p.learning_rate);
  p.max_depth = static_cast<int>(get("max_depth", p.max_depth));
  p.min_samples_leaf = static_cast<int>(get("min_samples_leaf", p.min_samples_leaf));
  p.l2_lambda = get("l2_lambda", p.l2_lambda);
  p.gain_gamma = get("gain_gamma", p.gain_gamma);
  return p;
}

Hyperparams GbdtParams::to_hyperparams() const {
  return {{"gain_gamma", gain_gamma},
          {"l2_lambda", l2_lambda},
          {"learning_rate", learning_rate},
          {"max_depth", static_cast<double>(max_depth)},
          {"min_samples_leaf", static_cast<double>(min_samples_leaf)},
          {"n_trees", static_cast<double>(n_trees)}};
}

double RegressionTree::predict(std::span<const double> x) const noexcept {
  std::size_t node = 0;
  while (nodes[node].feature >= 0) {
    const auto& n = nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[node].value;
}

double GbdtModel::raw_score(std::span<const double> x) const noexcept {
  double s = base_score_;
  for (const auto& tree : trees_) s += tree.predict(x);
  return s;
}

double GbdtModel::predict_one(std::span<const double> x) const {
  if (trees_.empty()) return prior_;
  return sigmoid(raw_score(x));
}

GbdtModel fit_gbdt(const Matrix& x, LabelSpan y, const GbdtParams& params) {
  params.validate();
  if (x.empty()) throw Error(ErrorCode::EmptyMatrix, "GBDT needs at least one row and one column");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, fmt::format("{} labels for {} rows", y.size(), x.rows()));
  }
  const std::size_t n = x.rows();
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (params.n_trees > 0 && (positives == 0 || positives == n)) {
    throw Error(ErrorCode::DegenerateLabels, "GBDT training needs both classes");
  }

  GbdtModel model;
  model.n_features_ = x.cols();
  model.prior_ = static_cast<double>(positives) / static_cast<double>(n);
  const double p0 = std::clamp(model.prior_, kProbEps, 1.0 - kProbEps);
  model.base_score_ = std::log(p0 / (1.0 - p0));
  model.feature_gain_.assign(x.cols(), 0.0);

  std::vector<double> scores(n, model.base_score_);
  double loss = mean_loss(scores, y);
  model.loss_history_.push_back(loss);
  if (params.n_trees == 0) return model;

  std::vector<std::vector<std::size_t>> sorted(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& order = sorted[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
  }

  TreeGrower grower(x, sorted, params);
  std::vector<double> g(n);
  std::vector<double> h(n);
  std::vector<double> trial(n);
  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(scores[i]);
      g[i] = p - static_cast<double>(y[i]);
      h[i] = p * (1.0 - p);
    }
    auto grown = grower.grow(g, h);

    // Backtracking on the shrunken Newton step keeps the training loss monotone.
    double step = params.learning_rate;
    bool accepted = false;
    double trial_loss = loss;
    for (int halving = 0; halving <= kMaxLineSearchHalvings; ++halving, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = scores[i] + step * grown.tree.nodes[static_cast<std::size_t>(grown.leaf_of[i])].value;
      }
      trial_loss = mean_loss(trial, y);
      if (trial_loss <= loss) {
        accepted = true;
        break;
      }
    }
    if (accepted) {
      for (auto& node : grown.tree.nodes) node.value *= step;
      for (const auto& [feature, gain] : grown.splits) {
        model.feature_gain_[static_cast<std::size_t>(feature)] += gain;
        model.total_gain_ += gain;
      }
      model.trees_.push_back(std::move(grown.tree));
      scores.swap(trial);
      loss = trial_loss;
    }
    model.loss_history_.push_back(loss);
  }
  return model;
}

std::vector<std::size_t> select_features(const Matrix& x, LabelSpan y, const GbdtParams& params,
                                         std::size_t top_k) {
  const auto model = fit_gbdt(x, y, params);
  const auto& gain = model.feature_gain();
  std::vector<std::size_t> order(gain.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Stable sort by descending gain keeps lower indices first among ties,
  // which also pads with never-split features in index order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
  order.resize(std::min(top_k, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

void GbdtModel::save(std::ostream& out) const {
  io::put_int(out, "n_features", n_features_);
  io::put_real(out, "prior", prior_);
  io::put_real(out, "base_score", base_score_);
  io::put_real(out, "total_gain", total_gain_);
  io::put_reals(out, "feature_gain", feature_gain_);
  io::put_reals(out, "loss_history", loss_history_);
  io::put_int(out, "n_trees", trees_.size());
  for (const auto& tree : trees_) {
    io::put_int(out, "tree", tree.nodes.size());
    for (const auto& node : tree.nodes) {
      out << "node " << node.feature << ' ' << csv::format_real(node.threshold) << ' ' << node.left << ' '
          << node.right << ' ' << csv::format_real(node.value) << '\n';
    }
  }
}

GbdtModel GbdtModel::load(std::istream& in) {
  GbdtModel m;
  m.n_features_ = static_cast<std::size_t>(io::get_int(in, "n_features"));
  m.prior_ = io::get_real(in, "prior");
  m.base_score_ = io::get_real(in, "base_score");
  m.total_gain_ = io::get_real(in, "total_gain");
  m.feature_gain_ = io::get_reals(in, "feature_gain");
  m.loss_history_ = io::get_reals(in, "loss_history");
  const auto n_trees = io::get_int(in, "n_trees");
  for (long long t = 0; t < n_trees; ++t) {
    RegressionTree tree;
    const auto n_nodes = io::get_int(in, "tree");
    for (long long k = 0; k < n_nodes; ++k) {
      io::expect(in, "node");
      RegressionTree::Node node;
      node.feature = static_cast<int>(io::get_int_token(in));
      node.threshold = io::get_real_token(in);
      node.left = static_cast<int>(io::get_int_token(in));
      node.right = static_cast<int>(io::get_int_token(in));
      node.value = io::get_real_token(in);
      const auto limit = static_cast<int>(n_nodes);
      if (node.feature >= static_cast<int>(m.n_features_) ||
          (node.feature >= 0 && (node.left <= k || node.right <= k || node.left >= limit || node.right >= limit))) {
        throw Error(ErrorCode::ParseError, "malformed tree node in model document");
      }
      tree.nodes.push_back(node);
    }
    if (tree.nodes.empty()) throw Error(ErrorCode::ParseError, "empty tree in model document");
    m.trees_.push_back(std::move(tree));
  }
  return m;
}

}  // namespace moodpupilar::learn
