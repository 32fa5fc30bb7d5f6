// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/rng.hpp"

namespace uwchan {

struct ForestHyper {
  int n_trees = 50;
  int max_depth = 12;
  int min_leaf = 5;
  double feature_fraction = 1.0 / 3.0;
  bool bootstrap = true;
  uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int leaf = -1;  // >= 0: row in leaf_values
};

struct RegressionTree {
  std::vector<TreeNode> nodes;       // node 0 is the root
  Eigen::MatrixXd leaf_values;       // one mean label vector per leaf
};

struct ForestParams {
  ForestHyper hyper;
  std::vector<RegressionTree> trees;
  Eigen::Index n_features = 0;
};

namespace detail {

/// Recursive variance-reduction tree builder. Splits minimize the summed
/// per-coordinate label variance (equivalently the within-node label SSE)
/// over a random feature subset, sweeping every threshold between distinct
/// feature values.
class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
              const ForestHyper& hyper, Rng& rng)
      : X_(X), Y_(Y), hyper_(hyper), rng_(rng) {}

  RegressionTree build(std::vector<int> indices) {
    tree_ = RegressionTree{};
    leaf_rows_.clear();
    grow(std::move(indices), 0);
    tree_.leaf_values.resize(static_cast<Eigen::Index>(leaf_rows_.size()),
                             Y_.cols());
    for (std::size_t l = 0; l < leaf_rows_.size(); ++l)
      tree_.leaf_values.row(static_cast<Eigen::Index>(l)) = leaf_rows_[l];
    return std::move(tree_);
  }

 private:
  int grow(std::vector<int> idx, int depth) {
    const int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    bool make_leaf = depth >= hyper_.max_depth ||
                     static_cast<int>(idx.size()) < 2 * hyper_.min_leaf;
    int best_feature = -1;
    double best_threshold = 0.0;
    if (!make_leaf) {
      std::tie(best_feature, best_threshold) = best_split(idx);
      if (best_feature < 0) make_leaf = true;
    }

    if (make_leaf) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(Y_.cols());
      for (int i : idx) mean += Y_.row(i);
      mean /= static_cast<double>(idx.size());
      tree_.nodes[node_id].leaf = static_cast<int>(leaf_rows_.size());
      leaf_rows_.push_back(mean);
      return node_id;
    }

    std::vector<int> left_idx, right_idx;
    left_idx.reserve(idx.size());
    right_idx.reserve(idx.size());
    for (int i : idx) {
      if (X_(i, best_feature) <= best_threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    tree_.nodes[node_id].feature = best_feature;
    tree_.nodes[node_id].threshold = best_threshold;
    const int l = grow(std::move(left_idx), depth + 1);
    tree_.nodes[node_id].left = l;
    const int r = grow(std::move(right_idx), depth + 1);
    tree_.nodes[node_id].right = r;
    return node_id;
  }

  std::pair<int, double> best_split(const std::vector<int>& idx) {
    const Eigen::Index d = X_.cols();
    const int m = std::max(
        1, static_cast<int>(hyper_.feature_fraction * static_cast<double>(d)));
    // Sample m distinct features (partial Fisher-Yates over a scratch list).
    feature_scratch_.resize(static_cast<std::size_t>(d));
    for (Eigen::Index f = 0; f < d; ++f)
      feature_scratch_[static_cast<std::size_t>(f)] = static_cast<int>(f);
    for (int j = 0; j < m; ++j) {
      const std::size_t pick =
          static_cast<std::size_t>(j) +
          static_cast<std::size_t>(rng_.uniform_int(
              static_cast<uint64_t>(d - j)));
      std::swap(feature_scratch_[static_cast<std::size_t>(j)],
                feature_scratch_[pick]);
    }

    const std::size_t n = idx.size();
    std::vector<std::pair<double, int>> order(n);
    Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(Y_.cols());
    double total_sq = 0.0;
    for (int i : idx) {
      total += Y_.row(i);
      total_sq += Y_.row(i).squaredNorm();
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::RowVectorXd left_sum(Y_.cols());
    for (int j = 0; j < m; ++j) {
      const int f = feature_scratch_[static_cast<std::size_t>(j)];
      for (std::size_t a = 0; a < n; ++a) order[a] = {X_(idx[a], f), idx[a]};
      std::sort(order.begin(), order.end());
      if (order.front().first == order.back().first) continue;

      left_sum.setZero();
      double left_sq = 0.0;
      for (std::size_t a = 0; a + 1 < n; ++a) {
        const int i = order[a].second;
        left_sum += Y_.row(i);
        left_sq += Y_.row(i).squaredNorm();
        const std::size_t n_l = a + 1;
        const std::size_t n_r = n - n_l;
        if (n_l < static_cast<std::size_t>(hyper_.min_leaf) ||
            n_r < static_cast<std::size_t>(hyper_.min_leaf))
          continue;
        if (order[a].first == order[a + 1].first) continue;  // not separable
        const double sse_l =
            left_sq - left_sum.squaredNorm() / static_cast<double>(n_l);
        const Eigen::RowVectorXd right_sum = total - left_sum;
        const double sse_r = (total_sq - left_sq) -
                             right_sum.squaredNorm() / static_cast<double>(n_r);
        const double sse = sse_l + sse_r;
        if (sse < best_sse) {
          best_sse = sse;
          best_feature = f;
          best_threshold = 0.5 * (order[a].first + order[a + 1].first);
        }
      }
    }
    return {best_feature, best_threshold};
  }

  const Eigen::MatrixXd& X_;
  const Eigen::MatrixXd& Y_;
  const ForestHyper& hyper_;
  Rng& rng_;
  RegressionTree tree_;
  std::vector<Eigen::RowVectorXd> leaf_rows_;
  std::vector<int> feature_scratch_;
};

}  // namespace detail

/// Bagged forest: each tree is fit on a seeded bootstrap resample (or the
/// full sample when bootstrap is off); prediction is the mean over trees.
inline ForestParams rf_fit(const Dataset& train, const ForestHyper& hyper) {
  if (hyper.n_trees < 1)
    throw std::invalid_argument("rf_fit: n_trees must be >= 1");
  if (hyper.max_depth < 1)
    throw std::invalid_argument("rf_fit: max_depth must be >= 1");
  if (hyper.min_leaf < 1)
    throw std::invalid_argument("rf_fit: min_leaf must be >= 1");
  if (!(hyper.feature_fraction > 0.0 && hyper.feature_fraction <= 1.0))
    throw std::invalid_argument("rf_fit: feature_fraction must be in (0,1]");
  if (train.rows() == 0) throw std::invalid_argument("rf_fit: empty data");

  ForestParams forest;
  forest.hyper = hyper;
  forest.n_features = train.X.cols();
  forest.trees.reserve(static_cast<std::size_t>(hyper.n_trees));
  const int n = static_cast<int>(train.rows());
  for (int t = 0; t < hyper.n_trees; ++t) {
    Rng rng(mix_seed(hyper.seed, 0x74726565u + static_cast<uint64_t>(t)));
    std::vector<int> idx(static_cast<std::size_t>(n));
    if (hyper.bootstrap) {
      for (int i = 0; i < n; ++i)
        idx[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n)));
    } else {
      for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    }
    detail::TreeBuilder builder(train.X, train.Y, hyper, rng);
    forest.trees.push_back(builder.build(std::move(idx)));
  }
  return forest;
}

inline Eigen::MatrixXd rf_predict(const ForestParams& forest,
                                  const Eigen::MatrixXd& X) {
  if (forest.trees.empty()) throw std::invalid_argument("rf_predict: empty forest");
  if (X.cols() != forest.n_features)
    throw std::invalid_argument("rf_predict: feature count mismatch");
  const Eigen::Index d_out = forest.trees.front().leaf_values.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), d_out);
  for (const RegressionTree& tree : forest.trees) {
    for (Eigen::Index q = 0; q < X.rows(); ++q) {
      int node = 0;
      while (tree.nodes[static_cast<std::size_t>(node)].leaf < 0) {
        const TreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = X(q, nd.feature) <= nd.threshold ? nd.left : nd.right;
      }
      out.row(q) +=
          tree.leaf_values.row(tree.nodes[static_cast<std::size_t>(node)].leaf);
    }
  }
  return out / static_cast<double>(forest.trees.size());
}

}  // namespace uwchan
