// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "uwchan/models/dense.hpp"
#include "uwchan/models/lstm.hpp"

namespace uwchan {

namespace detail {

/// Compare analytic gradients against central finite differences over every
/// parameter element. `loss` must evaluate the current parameter state.
/// Returns the maximum relative error.
inline double compare_gradients(const std::vector<ParamRef>& params,
                                const std::vector<ParamRef>& analytic,
                                const std::function<double()>& loss,
                                double step) {
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (Eigen::Index e = 0; e < params[p].size; ++e) {
      double& theta = params[p].data[e];
      const double saved = theta;
      theta = saved + step;
      const double up = loss();
      theta = saved - step;
      const double down = loss();
      theta = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[p].data[e];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

/// Doubles the largest-magnitude analytic gradient entry; a working checker
/// must flag this as a gross error.
inline void corrupt_largest(const std::vector<ParamRef>& analytic) {
  double best = -1.0;
  double* where = nullptr;
  for (const ParamRef& g : analytic)
    for (Eigen::Index e = 0; e < g.size; ++e)
      if (std::abs(g.data[e]) > best) {
        best = std::abs(g.data[e]);
        where = &g.data[e];
      }
  if (where) *where *= 2.0;
}

}  // namespace detail

inline double grad_check_dense(DenseNet& net, const Eigen::MatrixXd& X,
                               const Eigen::MatrixXd& Y, double step,
                               bool inject_fault = false) {
  DenseCache cache;
  const Eigen::MatrixXd pred = dense_forward(net, X, &cache);
  const double numel = static_cast<double>(pred.size());
  DenseGrads grads = dense_backward(net, cache, (2.0 / numel) * (pred - Y));
  std::vector<ParamRef> grad_refs = dense_grad_refs(grads);
  if (inject_fault) detail::corrupt_largest(grad_refs);
  auto loss = [&]() {
    const Eigen::MatrixXd p = dense_forward(net, X);
    return (p - Y).squaredNorm() / numel;
  };
  return detail::compare_gradients(dense_param_refs(net), grad_refs, loss, step);
}

inline double grad_check_lstm(LstmNet& net,
                              const std::vector<Eigen::MatrixXd>& steps,
                              const Eigen::MatrixXd& Y, double step,
                              bool inject_fault = false) {
  LstmCache cache;
  const Eigen::MatrixXd pred = lstm_forward(net, steps, &cache);
  const double numel = static_cast<double>(pred.size());
  LstmGrads grads = lstm_backward(net, cache, steps, (2.0 / numel) * (pred - Y));
  std::vector<ParamRef> grad_refs = lstm_grad_refs(grads);
  if (inject_fault) detail::corrupt_largest(grad_refs);
  auto loss = [&]() {
    const Eigen::MatrixXd p = lstm_forward(net, steps);
    return (p - Y).squaredNorm() / numel;
  };
  return detail::compare_gradients(lstm_param_refs(net), grad_refs, loss, step);
}

}  // namespace uwchan
