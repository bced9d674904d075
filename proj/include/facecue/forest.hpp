#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "facecue/error.hpp"
#include "facecue/landmarks.hpp"
#include "facecue/matrix.hpp"
#include "facecue/rng.hpp"

namespace facecue {

using ClassCounts = std::array<std::uint32_t, kClassCount>;

/// 1 - sum_c (count_c / total)^2.
inline double gini(const ClassCounts& counts) {
  const double total = static_cast<double>(counts[0]) + counts[1];
  if (total == 0.0) throw Error(ErrorCode::InvalidConfig, "gini of an empty node");
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double p = c / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

/// Majority class of `counts`; equal counts go to the earlier class (AS).
inline SentenceClass majority(const ClassCounts& counts) {
  return counts[class_index(SentenceClass::ST)] > counts[class_index(SentenceClass::AS)]
             ? SentenceClass::ST
             : SentenceClass::AS;
}

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;  ///< root is depth 0; unset = unlimited
  std::size_t min_samples_split = 2;
  std::optional<std::size_t> max_features;  ///< unset = ceil(sqrt(k))
  std::uint64_t seed = 0;
  /// Oracle-testing switch, not a modelling option: grows every tree on the
  /// full training set and considers every feature at every node.
  bool test_mode = false;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

inline std::size_t ceil_sqrt(std::size_t k) {
  std::size_t r = 0;
  while (r * r < k) ++r;
  return r;
}

struct TreeNode {
  std::int32_t feature = -1;  ///< -1 marks a leaf
  double threshold = 0.0;     ///< go left when value <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  ClassCounts counts{};  ///< training rows (with bootstrap multiplicity) reaching this node

  bool is_leaf() const { return feature < 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary tree in pre-order; nodes[0] is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
      const auto& n = nodes[i];
      i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
    }
    return nodes[i];
  }

  SentenceClass vote(std::span<const double> x) const { return majority(leaf_for(x).counts); }

  std::size_t depth() const { return depth_from(0); }

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::size_t depth_from(std::size_t i) const {
    if (nodes[i].is_leaf()) return 0;
    return 1 + std::max(depth_from(static_cast<std::size_t>(nodes[i].left)),
                        depth_from(static_cast<std::size_t>(nodes[i].right)));
  }
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestConfig config;  ///< max_features is always resolved after training
  std::size_t n_features = 0;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

namespace detail {

/// Split quality A/n_l + B/n_r with A, B the sums of squared class counts on
/// each side. Larger is better; it orders candidates exactly as weighted Gini
/// impurity does (in reverse), and is compared without rounding.
struct SplitScore {
  std::uint64_t sum_sq_left = 0, n_left = 0;
  std::uint64_t sum_sq_right = 0, n_right = 0;

  bool better_than(const SplitScore& o) const {
    using u128 = unsigned __int128;
    const u128 lhs = (u128(sum_sq_left) * n_right + u128(sum_sq_right) * n_left) *
                     (u128(o.n_left) * o.n_right);
    const u128 rhs = (u128(o.sum_sq_left) * o.n_right + u128(o.sum_sq_right) * o.n_left) *
                     (u128(n_left) * n_right);
    return lhs > rhs;
  }
};

inline std::uint64_t sum_sq(const ClassCounts& c) {
  return std::uint64_t(c[0]) * c[0] + std::uint64_t(c[1]) * c[1];
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const SentenceClass> y, const ForestConfig& config,
              Rng& rng)
      : x_(x), y_(y), config_(config), rng_(rng) {}

  DecisionTree build(std::vector<std::uint32_t> rows) {
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  struct Candidate {
    std::size_t feature;
    double threshold;
    SplitScore score;
  };

  std::vector<std::size_t> candidate_features() {
    const std::size_t k = x_.cols();
    std::vector<std::size_t> features(k);
    std::iota(features.begin(), features.end(), 0);
    if (config_.test_mode) return features;
    const std::size_t m = *config_.max_features;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(k - i));
      std::swap(features[i], features[j]);
    }
    features.resize(m);
    std::sort(features.begin(), features.end());
    return features;
  }

  std::optional<Candidate> best_split(const std::vector<std::uint32_t>& rows,
                                      const ClassCounts& total) {
    std::optional<Candidate> best;
    std::vector<std::pair<double, SentenceClass>> sorted(rows.size());
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {x_(rows[i], f), y_[rows[i]]};
      std::sort(sorted.begin(), sorted.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      ClassCounts left{};
      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left[class_index(sorted[i].second)];
        const double lo = sorted[i].first;
        const double hi = sorted[i + 1].first;
        if (!(lo < hi)) continue;
        double threshold = (lo + hi) / 2.0;
        // Adjacent doubles: the midpoint can round up onto hi.
        if (threshold >= hi) threshold = lo;
        const ClassCounts right{total[0] - left[0], total[1] - left[1]};
        const SplitScore score{sum_sq(left), i + 1, sum_sq(right), sorted.size() - i - 1};
        if (!best || score.better_than(best->score)) best = Candidate{f, threshold, score};
      }
    }
    return best;
  }

  std::int32_t grow(std::vector<std::uint32_t> rows, std::size_t depth) {
    const auto index = static_cast<std::int32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    ClassCounts counts{};
    for (auto r : rows) ++counts[class_index(y_[r])];
    tree_.nodes[index].counts = counts;

    const bool pure = counts[0] == 0 || counts[1] == 0;
    const bool depth_capped = config_.max_depth && depth >= *config_.max_depth;
    if (pure || depth_capped || rows.size() < config_.min_samples_split) return index;

    const auto split = best_split(rows, counts);
    if (!split) return index;

    std::vector<std::uint32_t> left_rows, right_rows;
    for (auto r : rows) {
      (x_(r, split->feature) <= split->threshold ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const auto left = grow(std::move(left_rows), depth + 1);
    const auto right = grow(std::move(right_rows), depth + 1);
    auto& node = tree_.nodes[index];
    node.feature = static_cast<std::int32_t>(split->feature);
    node.threshold = split->threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  const Matrix& x_;
  std::span<const SentenceClass> y_;
  const ForestConfig& config_;
  Rng& rng_;
  DecisionTree tree_;
};

}  // namespace detail

/// Resolves defaults against the feature count and checks every field.
inline ForestConfig resolve(ForestConfig config, std::size_t n_features) {
  if (config.n_trees < 1) throw Error(ErrorCode::InvalidConfig, "n_trees must be >= 1");
  if (config.max_depth && *config.max_depth < 1) {
    throw Error(ErrorCode::InvalidConfig, "max_depth must be >= 1");
  }
  if (config.min_samples_split < 2) {
    throw Error(ErrorCode::InvalidConfig, "min_samples_split must be >= 2");
  }
  if (!config.max_features) config.max_features = ceil_sqrt(n_features);
  if (*config.max_features < 1 || *config.max_features > n_features) {
    throw Error(ErrorCode::InvalidConfig,
                "max_features must be in 1.." + std::to_string(n_features));
  }
  return config;
}

/// Grows one tree. Tree `tree_index` draws its bootstrap sample and its
/// per-node feature subsets from a stream derived from (seed, tree_index).
inline DecisionTree train_tree(const Matrix& features, std::span<const SentenceClass> labels,
                               const ForestConfig& resolved, std::size_t tree_index) {
  Rng rng = Rng::stream(resolved.seed, StreamTag::Forest, tree_index);
  const auto n = static_cast<std::uint32_t>(features.rows());
  std::vector<std::uint32_t> rows(n);
  if (resolved.test_mode) {
    std::iota(rows.begin(), rows.end(), 0u);
  } else {
    for (auto& r : rows) r = static_cast<std::uint32_t>(rng.below(n));
  }
  return detail::TreeBuilder(features, labels, resolved, rng).build(std::move(rows));
}

/// Bagged CART forest with Gini splits. The result is identical for any
/// `threads` value.
inline ForestModel train_forest(const Matrix& features, std::span<const SentenceClass> labels,
                                const ForestConfig& config, unsigned threads = 1) {
  if (features.rows() == 0) throw Error(ErrorCode::EmptyTrainingSet, "no training rows");
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(labels.size()) + " labels for " +
                                                  std::to_string(features.rows()) + " rows");
  }
  if (features.cols() == 0) throw Error(ErrorCode::DimensionMismatch, "no feature columns");

  ForestModel model;
  model.config = resolve(config, features.cols());
  model.n_features = features.cols();
  model.trees.resize(model.config.n_trees);

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(model.trees.size())));
  if (threads == 1) {
    for (std::size_t t = 0; t < model.trees.size(); ++t) {
      model.trees[t] = train_tree(features, labels, model.config, t);
    }
    return model;
  }
  std::vector<std::jthread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t t = w; t < model.trees.size(); t += threads) {
        model.trees[t] = train_tree(features, labels, model.config, t);
      }
    });
  }
  workers.clear();
  return model;
}

/// Number of trees voting for each class.
inline ClassCounts tree_votes(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "feature width " + std::to_string(x.size()) +
                                                  ", forest expects " +
                                                  std::to_string(model.n_features));
  }
  ClassCounts votes{};
  for (const auto& tree : model.trees) ++votes[class_index(tree.vote(x))];
  return votes;
}

/// Per-class vote fractions in class order (AS, ST).
inline std::array<double, kClassCount> predict_proba(const ForestModel& model,
                                                     std::span<const double> x) {
  const auto votes = tree_votes(model, x);
  const double n = static_cast<double>(model.trees.size());
  return {votes[0] / n, votes[1] / n};
}

/// Majority vote across trees; a tied vote goes to AS.
inline SentenceClass predict(const ForestModel& model, std::span<const double> x) {
  return majority(tree_votes(model, x));
}

}  // namespace facecue
