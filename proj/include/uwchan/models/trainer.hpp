// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/models/adam.hpp"
#include "uwchan/models/dense.hpp"
#include "uwchan/models/lstm.hpp"
#include "uwchan/plot.hpp"
#include "uwchan/rng.hpp"

namespace uwchan {

struct TrainHyper {
  double lr = 0.001;
  int batch = 64;
  int epochs = 100;
  uint64_t seed = 0;
};

namespace detail {

inline void check_hyper(const TrainHyper& h) {
  if (h.batch < 1) throw std::invalid_argument("train: batch size must be >= 1");
  if (h.epochs < 0) throw std::invalid_argument("train: negative epoch count");
  if (!(h.lr > 0.0)) throw std::invalid_argument("train: learning rate must be > 0");
}

inline std::vector<Eigen::Index> shuffled_indices(Eigen::Index n, Rng& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  rng.shuffle(idx);
  return idx;
}

}  // namespace detail

/// Minibatch MSE + Adam on a dense net mapping one frame to one frame.
/// Deterministic for a fixed seed: the batch order comes from a seeded
/// shuffle and every reduction runs in index order.
inline LossCurve train_dense(DenseNet& net, const Dataset& train,
                             const Dataset& val, const TrainHyper& hyper) {
  detail::check_hyper(hyper);
  if (train.rows() == 0 || val.rows() == 0)
    throw std::invalid_argument("train_dense: empty train or val split");

  AdamState adam(AdamConfig{hyper.lr, 0.9, 0.999, 1e-8});
  std::vector<ParamRef> params = dense_param_refs(net);
  Rng shuffle_rng(mix_seed(hyper.seed, 0x73687566));  // 'shuf'
  LossCurve curve;

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const std::vector<Eigen::Index> order =
        detail::shuffled_indices(train.rows(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t elem_count = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t b =
          std::min(order.size() - start, static_cast<std::size_t>(hyper.batch));
      Eigen::MatrixXd xb(static_cast<Eigen::Index>(b), train.X.cols());
      Eigen::MatrixXd yb(static_cast<Eigen::Index>(b), train.Y.cols());
      for (std::size_t r = 0; r < b; ++r) {
        xb.row(static_cast<Eigen::Index>(r)) = train.X.row(order[start + r]);
        yb.row(static_cast<Eigen::Index>(r)) = train.Y.row(order[start + r]);
      }
      DenseCache cache;
      const Eigen::MatrixXd pred = dense_forward(net, xb, &cache);
      const Eigen::MatrixXd diff = pred - yb;
      const double numel = static_cast<double>(diff.size());
      const double loss = diff.squaredNorm() / numel;
      if (!std::isfinite(loss))
        throw NumericError("train_dense: non-finite loss at epoch " +
                           std::to_string(epoch + 1));
      DenseGrads grads = dense_backward(net, cache, (2.0 / numel) * diff);
      adam.step(params, dense_grad_refs(grads));
      loss_sum += loss * numel;
      elem_count += diff.size();
    }
    curve.train_loss.push_back(loss_sum / static_cast<double>(elem_count));
    const Eigen::MatrixXd vp = dense_forward(net, val.X);
    curve.val_loss.push_back((vp - val.Y).squaredNorm() /
                             static_cast<double>(vp.size()));
  }
  return curve;
}

namespace detail {

/// Gather window steps for the given window-start rows.
inline std::vector<Eigen::MatrixXd> gather_steps(
    const WindowedDataset& ds, const std::vector<Eigen::Index>& starts) {
  std::vector<Eigen::MatrixXd> steps(
      static_cast<std::size_t>(ds.window),
      Eigen::MatrixXd(static_cast<Eigen::Index>(starts.size()), ds.X.cols()));
  for (int t = 0; t < ds.window; ++t)
    for (std::size_t r = 0; r < starts.size(); ++r)
      steps[static_cast<std::size_t>(t)].row(static_cast<Eigen::Index>(r)) =
          ds.X.row(starts[r] + t);
  return steps;
}

inline Eigen::MatrixXd gather_labels(const WindowedDataset& ds,
                                     const std::vector<Eigen::Index>& starts) {
  Eigen::MatrixXd y(static_cast<Eigen::Index>(starts.size()), ds.Y.cols());
  for (std::size_t r = 0; r < starts.size(); ++r)
    y.row(static_cast<Eigen::Index>(r)) = ds.label_row(starts[r]);
  return y;
}

}  // namespace detail

/// Same loop for the sequence models, unrolling each window with BPTT.
inline LossCurve train_lstm(LstmNet& net, const WindowedDataset& train,
                            const WindowedDataset& val,
                            const TrainHyper& hyper) {
  detail::check_hyper(hyper);
  if (train.count() <= 0 || val.count() <= 0)
    throw std::invalid_argument("train_lstm: empty train or val split");

  AdamState adam(AdamConfig{hyper.lr, 0.9, 0.999, 1e-8});
  std::vector<ParamRef> params = lstm_param_refs(net);
  Rng shuffle_rng(mix_seed(hyper.seed, 0x73687566));
  LossCurve curve;

  std::vector<Eigen::Index> val_starts(static_cast<std::size_t>(val.count()));
  for (Eigen::Index i = 0; i < val.count(); ++i)
    val_starts[static_cast<std::size_t>(i)] = i;
  const std::vector<Eigen::MatrixXd> val_steps =
      detail::gather_steps(val, val_starts);
  const Eigen::MatrixXd val_labels = detail::gather_labels(val, val_starts);

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const std::vector<Eigen::Index> order =
        detail::shuffled_indices(train.count(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t elem_count = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hyper.batch)) {
      const std::size_t b =
          std::min(order.size() - start, static_cast<std::size_t>(hyper.batch));
      const std::vector<Eigen::Index> starts(order.begin() + start,
                                             order.begin() + start + b);
      const std::vector<Eigen::MatrixXd> steps =
          detail::gather_steps(train, starts);
      const Eigen::MatrixXd labels = detail::gather_labels(train, starts);

      LstmCache cache;
      const Eigen::MatrixXd pred = lstm_forward(net, steps, &cache);
      const Eigen::MatrixXd diff = pred - labels;
      const double numel = static_cast<double>(diff.size());
      const double loss = diff.squaredNorm() / numel;
      if (!std::isfinite(loss))
        throw NumericError("train_lstm: non-finite loss at epoch " +
                           std::to_string(epoch + 1));
      LstmGrads grads = lstm_backward(net, cache, steps, (2.0 / numel) * diff);
      adam.step(params, lstm_grad_refs(grads));
      loss_sum += loss * numel;
      elem_count += diff.size();
    }
    curve.train_loss.push_back(loss_sum / static_cast<double>(elem_count));
    const Eigen::MatrixXd vp = lstm_forward(net, val_steps);
    curve.val_loss.push_back((vp - val_labels).squaredNorm() /
                             static_cast<double>(vp.size()));
  }
  return curve;
}

}  // namespace uwchan
