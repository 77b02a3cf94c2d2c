// SPDX-FileCopyrightText: (c) 2026 The MoodPupilar Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "model_io.hpp"
#include "moodpupilar/gbdt.hpp"
#include "moodpupilar/learner.hpp"

namespace moodpupilar::learn {
namespace {

// ---------------------------------------------------------------------------
// Shared pieces

/// Per-column z-scoring fitted on training data. Constant columns keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x) {
    Standardizer s;
    s.mean.assign(x.cols(), 0.0);
    s.scale.assign(x.cols(), 1.0);
    const auto n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, c);
      const double m = sum / n;
      double ss = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - m) * (x(r, c) - m);
      const double sd = std::sqrt(ss / n);
      s.mean[c] = m;
      s.scale[c] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean[c]) / scale[c];
  }

  [[nodiscard]] Matrix apply(const Matrix& x) const {
    Matrix z(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) apply(x.row(r), z.row(r));
    return z;
  }

  void save(std::ostream& out) const {
    io::put_reals(out, "mean", mean);
    io::put_reals(out, "scale", scale);
  }

  static Standardizer load(std::istream& in) {
    Standardizer s;
    s.mean = io::get_reals(in, "mean");
    s.scale = io::get_reals(in, "scale");
    if (s.mean.size() != s.scale.size()) throw Error(ErrorCode::ParseError, "standardizer size mismatch");
    return s;
  }
};

double hp(const Hyperparams& params, const char* key) { return params.at(key); }

// ---------------------------------------------------------------------------
// Constant predictor, used when a training subset holds one class only.

class ConstantClassifier final : public Classifier {
 public:
  ConstantClassifier(LearnerKind stands_for, std::size_t n_features, double p)
      : kind_(stands_for), n_features_(n_features), p_(p) {}

  [[nodiscard]] LearnerKind kind() const noexcept override { return kind_; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }
  void save(std::ostream& out) const override {
    io::put_int(out, "stands_for", static_cast<int>(kind_));
    io::put_int(out, "n_features", n_features_);
    io::put_real(out, "p", p_);
  }
  static std::shared_ptr<ConstantClassifier> load(std::istream& in) {
    const auto kind = io::get_int(in, "stands_for");
    if (kind < 0 || kind > static_cast<long long>(LearnerKind::gbdt)) {
      throw Error(ErrorCode::ParseError, "bad learner kind in constant model");
    }
    const auto n = io::get_int(in, "n_features");
    const double p = io::get_real(in, "p");
    return std::make_shared<ConstantClassifier>(static_cast<LearnerKind>(kind), static_cast<std::size_t>(n), p);
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double>) const override { return p_; }

 private:
  LearnerKind kind_;
  std::size_t n_features_;
  double p_;
};

// ---------------------------------------------------------------------------
// Logistic regression: ridge-penalized Newton-Raphson on standardized inputs.

class LogisticRegression final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::logistic_regression; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return weights_.size(); }

  static std::shared_ptr<LogisticRegression> fit(const Matrix& x, LabelSpan y, const Hyperparams& params) {
    auto model = std::make_shared<LogisticRegression>();
    model->scaler_ = Standardizer::fit(x);
    const Matrix z = model->scaler_.apply(x);
    const auto n = static_cast<Eigen::Index>(z.rows());
    const auto d = static_cast<Eigen::Index>(z.cols());
    const double l2 = hp(params, "l2");
    const int max_iter = static_cast<int>(hp(params, "max_iter"));

    Eigen::MatrixXd design(n, d + 1);
    Eigen::VectorXd target(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      design(i, 0) = 1.0;
      for (Eigen::Index j = 0; j < d; ++j) design(i, j + 1) = z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      target(i) = y[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd penalty = Eigen::VectorXd::Constant(d + 1, l2);
    penalty(0) = 1e-8;  // intercept: effectively unpenalized, keeps the Hessian definite

    auto objective = [&](const Eigen::VectorXd& w) {
      const Eigen::VectorXd s = design * w;
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = target(i) > 0.5 ? -s(i) : s(i);
        total += m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
      }
      return total + 0.5 * w.dot(penalty.cwiseProduct(w));
    };

    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    double current = objective(w);
    for (int iter = 0; iter < max_iter; ++iter) {
      const Eigen::VectorXd s = design * w;
      Eigen::VectorXd p(n);
      Eigen::VectorXd weight(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        p(i) = sigmoid(s(i));
        weight(i) = std::max(p(i) * (1.0 - p(i)), 1e-12);
      }
      const Eigen::VectorXd grad = design.transpose() * (p - target) + penalty.cwiseProduct(w);
      Eigen::MatrixXd hess = design.transpose() * weight.asDiagonal() * design;
      hess.diagonal() += penalty;
      const Eigen::VectorXd step = hess.ldlt().solve(grad);
      double t = 1.0;
      Eigen::VectorXd next = w - step;
      double next_obj = objective(next);
      while (next_obj > current && t > 1e-6) {
        t *= 0.5;
        next = w - t * step;
        next_obj = objective(next);
      }
      if (next_obj > current) break;
      const double change = (next - w).norm();
      w = next;
      current = next_obj;
      if (change < 1e-10) break;
    }
    model->intercept_ = w(0);
    model->weights_.resize(static_cast<std::size_t>(d));
    for (Eigen::Index j = 0; j < d; ++j) model->weights_[static_cast<std::size_t>(j)] = w(j + 1);
    return model;
  }

  void save(std::ostream& out) const override {
    scaler_.save(out);
    io::put_real(out, "intercept", intercept_);
    io::put_reals(out, "weights", weights_);
  }

  static std::shared_ptr<LogisticRegression> load(std::istream& in) {
    auto m = std::make_shared<LogisticRegression>();
    m->scaler_ = Standardizer::load(in);
    m->intercept_ = io::get_real(in, "intercept");
    m->weights_ = io::get_reals(in, "weights");
    if (m->weights_.size() != m->scaler_.mean.size()) throw Error(ErrorCode::ParseError, "weight size mismatch");
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override {
    double s = intercept_;
    for (std::size_t j = 0; j < weights_.size(); ++j) s += weights_[j] * (x[j] - scaler_.mean[j]) / scaler_.scale[j];
    return sigmoid(s);
  }

 private:
  Standardizer scaler_;
  double intercept_ = 0.0;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// CART classification trees (Gini), shared by the tree and the forest.

struct CartParams {
  int max_depth = 4;
  int min_samples_leaf = 5;
  std::size_t max_features = 0;  // 0 = all
};

class CartBuilder {
 public:
  CartBuilder(const Matrix& x, LabelSpan y, const CartParams& params, std::mt19937_64* rng)
      : x_(x), y_(y), params_(params), rng_(rng) {}

  RegressionTree build(std::vector<std::size_t> samples) {
    RegressionTree tree;
    tree.nodes.emplace_back();
    grow(tree, 0, std::move(samples), 0);
    return tree;
  }

 private:
  static double gini_mass(double pos, double n) {
    if (n <= 0) return 0.0;
    const double p = pos / n;
    return n * 2.0 * p * (1.0 - p);
  }

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> features(x_.cols());
    std::iota(features.begin(), features.end(), std::size_t{0});
    if (params_.max_features == 0 || params_.max_features >= features.size() || rng_ == nullptr) return features;
    for (std::size_t i = 0; i < params_.max_features; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, features.size() - 1);
      std::swap(features[i], features[pick(*rng_)]);
    }
    features.resize(params_.max_features);
    std::sort(features.begin(), features.end());
    return features;
  }

  void grow(RegressionTree& tree, int node, std::vector<std::size_t> samples, int depth) {
    const auto n = static_cast<double>(samples.size());
    double pos = 0.0;
    for (const std::size_t i : samples) pos += y_[i];
    const auto leaf = [&] { tree.nodes[static_cast<std::size_t>(node)].value = samples.empty() ? 0.5 : pos / n; };
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    if (depth >= params_.max_depth || samples.size() < 2 * min_leaf || pos == 0.0 || pos == n) {
      leaf();
      return;
    }

    const double parent = gini_mass(pos, n);
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = samples;
    for (const std::size_t f : candidate_features()) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x_(a, f) < x_(b, f); });
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left_pos += y_[order[k]];
        const std::size_t nl = k + 1;
        const std::size_t nr = order.size() - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        if (x_(order[k], f) == x_(order[k + 1], f)) continue;
        const double gain = parent - gini_mass(left_pos, static_cast<double>(nl)) -
                            gini_mass(pos - left_pos, static_cast<double>(nr));
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = x_(order[k], f);
        }
      }
    }
    if (best_feature < 0) {
      leaf();
      return;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const std::size_t i : samples) {
      (x_(i, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int left_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    auto& nd = tree.nodes[static_cast<std::size_t>(node)];
    nd.feature = best_feature;
    nd.threshold = best_threshold;
    nd.left = left_id;
    nd.right = left_id + 1;
    grow(tree, left_id, std::move(left), depth + 1);
    grow(tree, left_id + 1, std::move(right), depth + 1);
  }

  const Matrix& x_;
  LabelSpan y_;
  const CartParams& params_;
  std::mt19937_64* rng_;
};

void save_tree(std::ostream& out, const RegressionTree& tree) {
  io::put_int(out, "tree", tree.nodes.size());
  for (const auto& node : tree.nodes) {
    out << "node " << node.feature << ' ' << csv::format_real(node.threshold) << ' ' << node.left << ' ' << node.right
        << ' ' << csv::format_real(node.value) << '\n';
  }
}

RegressionTree load_tree(std::istream& in, std::size_t n_features) {
  RegressionTree tree;
  const auto n_nodes = io::get_int(in, "tree");
  if (n_nodes <= 0) throw Error(ErrorCode::ParseError, "empty tree in model document");
  for (long long k = 0; k < n_nodes; ++k) {
    io::expect(in, "node");
    RegressionTree::Node node;
    node.feature = static_cast<int>(io::get_int_token(in));
    node.threshold = io::get_real_token(in);
    node.left = static_cast<int>(io::get_int_token(in));
    node.right = static_cast<int>(io::get_int_token(in));
    node.value = io::get_real_token(in);
    if (node.feature >= static_cast<int>(n_features) ||
        (node.feature >= 0 && (node.left <= k || node.right <= k || node.left >= n_nodes || node.right >= n_nodes))) {
      throw Error(ErrorCode::ParseError, "malformed tree node in model document");
    }
    tree.nodes.push_back(node);
  }
  return tree;
}

class DecisionTree final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::decision_tree; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }

  static std::shared_ptr<DecisionTree> fit(const Matrix& x, LabelSpan y, const Hyperparams& params) {
    CartParams cart;
    cart.max_depth = static_cast<int>(hp(params, "max_depth"));
    cart.min_samples_leaf = static_cast<int>(hp(params, "min_samples_leaf"));
    auto model = std::make_shared<DecisionTree>();
    model->n_features_ = x.cols();
    std::vector<std::size_t> all(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    model->tree_ = CartBuilder(x, y, cart, nullptr).build(std::move(all));
    return model;
  }

  void save(std::ostream& out) const override {
    io::put_int(out, "n_features", n_features_);
    save_tree(out, tree_);
  }

  static std::shared_ptr<DecisionTree> load(std::istream& in) {
    auto m = std::make_shared<DecisionTree>();
    m->n_features_ = static_cast<std::size_t>(io::get_int(in, "n_features"));
    m->tree_ = load_tree(in, m->n_features_);
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override { return tree_.predict(x); }

 private:
  std::size_t n_features_ = 0;
  RegressionTree tree_;
};

class RandomForest final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::random_forest; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return n_features_; }

  static std::shared_ptr<RandomForest> fit(const Matrix& x, LabelSpan y, const Hyperparams& params,
                                           std::uint64_t seed) {
    CartParams cart;
    cart.max_depth = static_cast<int>(hp(params, "max_depth"));
    cart.min_samples_leaf = static_cast<int>(hp(params, "min_samples_leaf"));
    const double fraction = hp(params, "max_features");
    cart.max_features = fraction > 0.0
                            ? std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(x.cols()))))
                            : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols())))));
    const auto n_trees = static_cast<std::size_t>(hp(params, "n_trees"));

    auto model = std::make_shared<RandomForest>();
    model->n_features_ = x.cols();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> draw(0, x.rows() - 1);
    for (std::size_t t = 0; t < n_trees; ++t) {
      std::vector<std::size_t> bootstrap(x.rows());
      for (auto& i : bootstrap) i = draw(rng);
      model->trees_.push_back(CartBuilder(x, y, cart, &rng).build(std::move(bootstrap)));
    }
    return model;
  }

  void save(std::ostream& out) const override {
    io::put_int(out, "n_features", n_features_);
    io::put_int(out, "n_trees", trees_.size());
    for (const auto& t : trees_) save_tree(out, t);
  }

  static std::shared_ptr<RandomForest> load(std::istream& in) {
    auto m = std::make_shared<RandomForest>();
    m->n_features_ = static_cast<std::size_t>(io::get_int(in, "n_features"));
    const auto n = io::get_int(in, "n_trees");
    for (long long t = 0; t < n; ++t) m->trees_.push_back(load_tree(in, m->n_features_));
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override {
    if (trees_.empty()) return 0.5;
    double s = 0.0;
    for (const auto& t : trees_) s += t.predict(x);
    return s / static_cast<double>(trees_.size());
  }

 private:
  std::size_t n_features_ = 0;
  std::vector<RegressionTree> trees_;
};

// ---------------------------------------------------------------------------
// k-nearest neighbours on standardized inputs; ties go to the lower row index.

class Knn final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::knn; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return scaler_.mean.size(); }

  static std::shared_ptr<Knn> fit(const Matrix& x, LabelSpan y, const Hyperparams& params) {
    auto model = std::make_shared<Knn>();
    model->k_ = static_cast<std::size_t>(hp(params, "k"));
    model->scaler_ = Standardizer::fit(x);
    model->points_ = model->scaler_.apply(x);
    model->labels_.assign(y.begin(), y.end());
    return model;
  }

  void save(std::ostream& out) const override {
    io::put_int(out, "k", k_);
    scaler_.save(out);
    io::put_int(out, "rows", points_.rows());
    for (std::size_t r = 0; r < points_.rows(); ++r) {
      out << "point " << labels_[r];
      for (const double v : points_.row(r)) out << ' ' << csv::format_real(v);
      out << '\n';
    }
  }

  static std::shared_ptr<Knn> load(std::istream& in) {
    auto m = std::make_shared<Knn>();
    m->k_ = static_cast<std::size_t>(io::get_int(in, "k"));
    m->scaler_ = Standardizer::load(in);
    const auto rows = static_cast<std::size_t>(io::get_int(in, "rows"));
    const std::size_t d = m->scaler_.mean.size();
    m->points_ = Matrix(rows, d);
    m->labels_.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      io::expect(in, "point");
      m->labels_[r] = static_cast<int>(io::get_int_token(in));
      for (std::size_t c = 0; c < d; ++c) m->points_(r, c) = io::get_real_token(in);
    }
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override {
    std::vector<double> z(x.size());
    scaler_.apply(x, z);
    std::vector<std::pair<double, std::size_t>> dist(points_.rows());
    for (std::size_t r = 0; r < points_.rows(); ++r) {
      double d2 = 0.0;
      const auto p = points_.row(r);
      for (std::size_t c = 0; c < z.size(); ++c) d2 += (p[c] - z[c]) * (p[c] - z[c]);
      dist[r] = {d2, r};
    }
    const std::size_t k = std::min(k_, dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    double pos = 0.0;
    for (std::size_t i = 0; i < k; ++i) pos += labels_[dist[i].second];
    return pos / static_cast<double>(k);
  }

 private:
  std::size_t k_ = 5;
  Standardizer scaler_;
  Matrix points_;
  std::vector<int> labels_;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes. Variances are floored at var_smoothing times the
// largest feature variance.

class GaussianNb final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::gaussian_nb; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return mean_[0].size(); }

  static std::shared_ptr<GaussianNb> fit(const Matrix& x, LabelSpan y, const Hyperparams& params) {
    auto model = std::make_shared<GaussianNb>();
    const std::size_t d = x.cols();
    double max_var = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const auto col = x.column(c);
      const double m = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
      double ss = 0.0;
      for (const double v : col) ss += (v - m) * (v - m);
      max_var = std::max(max_var, ss / static_cast<double>(col.size()));
    }
    const double epsilon = std::max(hp(params, "var_smoothing") * max_var, 1e-12);
    for (int cls = 0; cls < 2; ++cls) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == cls) idx.push_back(i);
      }
      model->log_prior_[cls] = std::log(static_cast<double>(idx.size()) / static_cast<double>(y.size()));
      model->mean_[cls].assign(d, 0.0);
      model->var_[cls].assign(d, epsilon);
      const auto n = static_cast<double>(idx.size());
      for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (const std::size_t i : idx) sum += x(i, c);
        const double m = sum / n;
        double ss = 0.0;
        for (const std::size_t i : idx) ss += (x(i, c) - m) * (x(i, c) - m);
        model->mean_[cls][c] = m;
        model->var_[cls][c] = ss / n + epsilon;
      }
    }
    return model;
  }

  void save(std::ostream& out) const override {
    for (int cls = 0; cls < 2; ++cls) {
      io::put_real(out, "log_prior", log_prior_[cls]);
      io::put_reals(out, "mean", mean_[cls]);
      io::put_reals(out, "var", var_[cls]);
    }
  }

  static std::shared_ptr<GaussianNb> load(std::istream& in) {
    auto m = std::make_shared<GaussianNb>();
    for (int cls = 0; cls < 2; ++cls) {
      m->log_prior_[cls] = io::get_real(in, "log_prior");
      m->mean_[cls] = io::get_reals(in, "mean");
      m->var_[cls] = io::get_reals(in, "var");
    }
    if (m->mean_[0].size() != m->mean_[1].size() || m->var_[0].size() != m->mean_[0].size() ||
        m->var_[1].size() != m->mean_[0].size()) {
      throw Error(ErrorCode::ParseError, "naive Bayes size mismatch");
    }
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override {
    std::array<double, 2> ll{};
    for (int cls = 0; cls < 2; ++cls) {
      double s = log_prior_[cls];
      for (std::size_t c = 0; c < x.size(); ++c) {
        const double diff = x[c] - mean_[cls][c];
        s -= 0.5 * (std::log(2.0 * 3.14159265358979323846 * var_[cls][c]) + diff * diff / var_[cls][c]);
      }
      ll[cls] = s;
    }
    return sigmoid(ll[1] - ll[0]);
  }

 private:
  std::array<double, 2> log_prior_{};
  std::array<std::vector<double>, 2> mean_;
  std::array<std::vector<double>, 2> var_;
};

// ---------------------------------------------------------------------------
// Linear SVM trained with Pegasos SGD on the hinge loss. The bias is a
// constant input column; the returned weights average the second half of the
// iterates. Probabilities are the logistic of the margin.

class LinearSvm final : public Classifier {
 public:
  [[nodiscard]] LearnerKind kind() const noexcept override { return LearnerKind::linear_svm_sgd; }
  [[nodiscard]] std::size_t n_features() const noexcept override { return scaler_.mean.size(); }

  static std::shared_ptr<LinearSvm> fit(const Matrix& x, LabelSpan y, const Hyperparams& params, std::uint64_t seed) {
    auto model = std::make_shared<LinearSvm>();
    model->scaler_ = Standardizer::fit(x);
    const Matrix z = model->scaler_.apply(x);
    const double lambda = hp(params, "lambda");
    const auto epochs = static_cast<std::size_t>(hp(params, "epochs"));
    const std::size_t d = z.cols() + 1;
    const std::size_t n = z.rows();
    const double radius = 1.0 / std::sqrt(lambda);

    std::vector<double> w(d, 0.0);
    std::vector<double> avg(d, 0.0);
    std::size_t averaged = 0;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    const std::size_t total_steps = epochs * n;
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (const std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double label = y[i] == 1 ? 1.0 : -1.0;
        const auto zi = z.row(i);
        double margin = w[d - 1];
        for (std::size_t c = 0; c + 1 < d; ++c) margin += w[c] * zi[c];
        margin *= label;
        const double shrink = 1.0 - eta * lambda;
        for (auto& v : w) v *= shrink;
        if (margin < 1.0) {
          for (std::size_t c = 0; c + 1 < d; ++c) w[c] += eta * label * zi[c];
          w[d - 1] += eta * label;
        }
        double norm2 = 0.0;
        for (const double v : w) norm2 += v * v;
        if (norm2 > radius * radius) {
          const double f = radius / std::sqrt(norm2);
          for (auto& v : w) v *= f;
        }
        if (2 * t > total_steps) {
          for (std::size_t c = 0; c < d; ++c) avg[c] += w[c];
          ++averaged;
        }
      }
    }
    if (averaged > 0) {
      for (auto& v : avg) v /= static_cast<double>(averaged);
    } else {
      avg = w;
    }
    model->bias_ = avg[d - 1];
    model->weights_.assign(avg.begin(), avg.end() - 1);
    return model;
  }

  void save(std::ostream& out) const override {
    scaler_.save(out);
    io::put_real(out, "bias", bias_);
    io::put_reals(out, "weights", weights_);
  }

  static std::shared_ptr<LinearSvm> load(std::istream& in) {
    auto m = std::make_shared<LinearSvm>();
    m->scaler_ = Standardizer::load(in);
    m->bias_ = io::get_real(in, "bias");
    m->weights_ = io::get_reals(in, "weights");
    if (m->weights_.size() != m->scaler_.mean.size()) throw Error(ErrorCode::ParseError, "weight size mismatch");
    return m;
  }

 protected:
  [[nodiscard]] double predict_one(std::span<const double> x) const override {
    double s = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) s += weights_[j] * (x[j] - scaler_.mean[j]) / scaler_.scale[j];
    return sigmoid(s);
  }

 private:
  Standardizer scaler_;
  double bias_ = 0.0;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Hyperparameter tables

struct KindInfo {
  Hyperparams defaults;
  std::vector<Hyperparams> grid;
};

std::vector<Hyperparams> product(const Hyperparams& base, const std::string& k1, std::vector<double> v1,
                                 const std::string& k2 = {}, std::vector<double> v2 = {0.0}) {
  std::vector<Hyperparams> out;
  for (const double a : v1) {
    for (const double b : v2) {
      Hyperparams p = base;
      p[k1] = a;
      if (!k2.empty()) p[k2] = b;
      out.push_back(std::move(p));
    }
  }
  return out;
}

const KindInfo& info(LearnerKind kind) {
  static const std::map<LearnerKind, KindInfo> table = [] {
    std::map<LearnerKind, KindInfo> t;
    {
      Hyperparams d{{"l2", 1.0}, {"max_iter", 100}};
      t[LearnerKind::logistic_regression] = {d, product(d, "l2", {0.01, 0.1, 1.0, 10.0, 100.0})};
    }
    {
      Hyperparams d{{"max_depth", 4}, {"min_samples_leaf", 5}};
      t[LearnerKind::decision_tree] = {d, product(d, "max_depth", {2, 3, 4, 6}, "min_samples_leaf", {5, 20})};
    }
    {
      Hyperparams d{{"n_trees", 50}, {"max_depth", 6}, {"min_samples_leaf", 5}, {"max_features", 0.0}};
      t[LearnerKind::random_forest] = {d, product(d, "max_depth", {3, 6}, "min_samples_leaf", {5, 10})};
    }
    {
      Hyperparams d{{"k", 5}};
      t[LearnerKind::knn] = {d, product(d, "k", {1, 3, 5, 9, 15, 25})};
    }
    {
      Hyperparams d{{"var_smoothing", 1e-9}};
      t[LearnerKind::gaussian_nb] = {d, product(d, "var_smoothing", {1e-9, 1e-6, 1e-3, 1e-1})};
    }
    {
      Hyperparams d{{"lambda", 1e-2}, {"epochs", 20}};
      t[LearnerKind::linear_svm_sgd] = {d, product(d, "lambda", {1e-4, 1e-3, 1e-2, 1e-1})};
    }
    {
      Hyperparams d = GbdtParams{}.to_hyperparams();
      std::vector<Hyperparams> grid;
      for (const auto& base : product(d, "n_trees", {50, 100}, "max_depth", {2, 3})) {
        for (auto& p : product(base, "learning_rate", {0.05, 0.1})) grid.push_back(std::move(p));
      }
      t[LearnerKind::gbdt] = {d, std::move(grid)};
    }
    return t;
  }();
  return table.at(kind);
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

void check_domain(LearnerKind kind, const std::string& key, double v) {
  bool ok = std::isfinite(v);
  if (key == "max_iter" || key == "max_depth" || key == "min_samples_leaf" || key == "n_trees" || key == "k" ||
      key == "epochs") {
    ok = ok && is_integral(v) && (v >= 1 || (key == "n_trees" && v >= 0));
  } else if (key == "l2" || key == "l2_lambda" || key == "gain_gamma" || key == "var_smoothing") {
    ok = ok && v >= 0;
  } else if (key == "lambda" || key == "learning_rate") {
    ok = ok && v > 0;
  } else if (key == "max_features") {
    ok = ok && v >= 0 && v <= 1;
  }
  if (!ok) {
    throw Error(ErrorCode::InvalidConfig,
                fmt::format("hyperparameter {}={} is out of range for {}", key, v, to_string(kind)));
  }
}

}  // namespace

std::string_view to_string(LearnerKind kind) noexcept {
  switch (kind) {
    case LearnerKind::logistic_regression: return "logistic_regression";
    case LearnerKind::decision_tree: return "decision_tree";
    case LearnerKind::random_forest: return "random_forest";
    case LearnerKind::knn: return "knn";
    case LearnerKind::gaussian_nb: return "gaussian_nb";
    case LearnerKind::linear_svm_sgd: return "linear_svm_sgd";
    case LearnerKind::gbdt: return "gbdt";
  }
  return "unknown";
}

std::optional<LearnerKind> parse_learner_kind(std::string_view text) noexcept {
  for (const auto kind : kAllLearnerKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

const Hyperparams& default_hyperparams(LearnerKind kind) { return info(kind).defaults; }

const std::vector<Hyperparams>& default_grid(LearnerKind kind) { return info(kind).grid; }

LearnerSpec resolve_spec(const LearnerSpec& spec) {
  LearnerSpec out = spec;
  out.hyperparams = default_hyperparams(spec.kind);
  for (const auto& [key, value] : spec.hyperparams) {
    if (!out.hyperparams.contains(key)) {
      throw Error(ErrorCode::InvalidConfig,
                  fmt::format("unknown hyperparameter '{}' for {}", key, to_string(spec.kind)));
    }
    out.hyperparams[key] = value;
  }
  for (const auto& [key, value] : out.hyperparams) check_domain(spec.kind, key, value);
  return out;
}

std::vector<double> Classifier::predict_proba(const Matrix& x) const {
  if (x.cols() != n_features()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("model expects {} features, got {}", n_features(), x.cols()));
  }
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = std::clamp(predict_one(x.row(r)), 0.0, 1.0);
  return out;
}

double Classifier::predict_row(std::span<const double> x) const {
  if (x.size() != n_features()) {
    throw Error(ErrorCode::DimensionMismatch,
                fmt::format("model expects {} features, got {}", n_features(), x.size()));
  }
  return std::clamp(predict_one(x), 0.0, 1.0);
}

ClassifierPtr fit_learner(const LearnerSpec& spec, const Matrix& x, LabelSpan y) {
  const LearnerSpec resolved = resolve_spec(spec);
  if (x.empty()) throw Error(ErrorCode::EmptyMatrix, "cannot fit on an empty matrix");
  if (y.size() != x.rows()) {
    throw Error(ErrorCode::DimensionMismatch, fmt::format("{} labels for {} rows", y.size(), x.rows()));
  }
  for (const int label : y) {
    if (label != 0 && label != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
  }
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  const bool single_class = positives == 0 || positives == y.size();
  const auto& hp = resolved.hyperparams;
  switch (resolved.kind) {
    case LearnerKind::gbdt:
      return std::make_shared<GbdtModel>(fit_gbdt(x, y, GbdtParams::from_hyperparams(hp)));
    case LearnerKind::knn:
      return Knn::fit(x, y, hp);
    default:
      break;
  }
  if (single_class) {
    throw Error(ErrorCode::DegenerateLabels,
                fmt::format("{} training needs both classes", to_string(resolved.kind)));
  }
  switch (resolved.kind) {
    case LearnerKind::logistic_regression: return LogisticRegression::fit(x, y, hp);
    case LearnerKind::decision_tree: return DecisionTree::fit(x, y, hp);
    case LearnerKind::random_forest: return RandomForest::fit(x, y, hp, resolved.seed);
    case LearnerKind::gaussian_nb: return GaussianNb::fit(x, y, hp);
    case LearnerKind::linear_svm_sgd: return LinearSvm::fit(x, y, hp, resolved.seed);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "unhandled learner kind");
}

ClassifierPtr make_constant_classifier(LearnerKind stands_for, std::size_t n_features, double p) {
  return std::make_shared<ConstantClassifier>(stands_for, n_features, p);
}

void save_classifier(const Classifier& model, std::ostream& out) {
  const bool constant = dynamic_cast<const ConstantClassifier*>(&model) != nullptr;
  out << "learner " << (constant ? std::string_view("constant") : to_string(model.kind())) << '\n';
  model.save(out);
  out << "end_learner\n";
}

ClassifierPtr load_classifier(std::istream& in) {
  io::expect(in, "learner");
  const auto tag = io::next_token(in);
  ClassifierPtr model;
  if (tag == "constant") {
    model = ConstantClassifier::load(in);
  } else {
    const auto kind = parse_learner_kind(tag);
    if (!kind) throw Error(ErrorCode::ParseError, fmt::format("unknown learner '{}' in model document", tag));
    switch (*kind) {
      case LearnerKind::logistic_regression: model = LogisticRegression::load(in); break;
      case LearnerKind::decision_tree: model = DecisionTree::load(in); break;
      case LearnerKind::random_forest: model = RandomForest::load(in); break;
      case LearnerKind::knn: model = Knn::load(in); break;
      case LearnerKind::gaussian_nb: model = GaussianNb::load(in); break;
      case LearnerKind::linear_svm_sgd: model = LinearSvm::load(in); break;
      case LearnerKind::gbdt: model = std::make_shared<GbdtModel>(GbdtModel::load(in)); break;
    }
  }
  io::expect(in, "end_learner");
  return model;
}

}  // namespace moodpupilar::learn
