// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"

namespace uwchan {

/// k-nearest-neighbour regressor: stores the training set verbatim.
struct NeighborStore {
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  int k = 1;
};

inline NeighborStore knn_fit(const Dataset& train, int k) {
  if (train.rows() == 0) throw std::invalid_argument("knn_fit: empty store");
  if (k < 1 || k > train.rows())
    throw std::invalid_argument("knn_fit: k must be in [1, N_train]");
  return NeighborStore{train.X, train.Y, k};
}

/// Unweighted mean of the k nearest labels under Euclidean distance on the
/// input frame; distance ties are broken by lower training index.
inline Eigen::MatrixXd knn_predict(const NeighborStore& store,
                                   const Eigen::MatrixXd& X) {
  if (store.X.rows() == 0) throw std::invalid_argument("knn_predict: empty store");
  if (X.cols() != store.X.cols())
    throw std::invalid_argument("knn_predict: feature count mismatch");
  const Eigen::Index n_train = store.X.rows();
  const int k = store.k;

  Eigen::MatrixXd out(X.rows(), store.Y.cols());
  const Eigen::VectorXd train_sq = store.X.rowwise().squaredNorm();
  std::vector<std::pair<double, Eigen::Index>> dist(
      static_cast<std::size_t>(n_train));
  for (Eigen::Index q = 0; q < X.rows(); ++q) {
    // |x - q|^2 = |x|^2 - 2 x.q + |q|^2; the query term is constant and
    // dropped (it cannot change the ordering).
    const Eigen::VectorXd cross = store.X * X.row(q).transpose();
    for (Eigen::Index i = 0; i < n_train; ++i)
      dist[static_cast<std::size_t>(i)] = {train_sq[i] - 2.0 * cross[i], i};
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(store.Y.cols());
    for (int j = 0; j < k; ++j) acc += store.Y.row(dist[j].second);
    out.row(q) = acc / static_cast<double>(k);
  }
  return out;
}

/// Hyperparameter sweep from the text: pick the k with the lowest validation
/// MAPE among the candidates; ties go to the smaller k.
inline int knn_select_k(const Dataset& train, const Dataset& val,
                        const std::vector<int>& candidates,
                        double val_epsilon) {
  if (candidates.empty())
    throw std::invalid_argument("knn_select_k: no candidates");
  int best_k = candidates.front();
  double best_err = -1.0;
  for (int k : candidates) {
    if (k < 1 || k > train.rows()) continue;
    NeighborStore store = knn_fit(train, k);
    const Eigen::MatrixXd pred = knn_predict(store, val.X);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < val.Y.rows(); ++i)
      for (Eigen::Index j = 0; j < val.Y.cols(); ++j)
        acc += std::abs(val.Y(i, j) - pred(i, j)) /
               std::max(std::abs(val.Y(i, j)), val_epsilon);
    if (best_err < 0.0 || acc < best_err) {
      best_err = acc;
      best_k = k;
    }
  }
  return best_k;
}

}  // namespace uwchan
