// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "uwchan/errors.hpp"

namespace uwchan {

/// Default denominator floor for MAPE on zero-crossing waveforms:
/// 1e-3 of the RMS of the actual values.
inline double default_mape_epsilon(const Eigen::MatrixXd& actual) {
  if (actual.size() == 0)
    throw std::invalid_argument("default_mape_epsilon: empty input");
  return 1e-3 * std::sqrt(actual.array().square().mean());
}

/// Mean absolute percentage error:
///   (100/n) * sum |A_t - F_t| / max(|A_t|, eps).
/// eps = 0 is allowed only when no actual value is exactly zero. Accumulation
/// order is fixed (row-major) for determinism.
inline double mape(const Eigen::MatrixXd& actual, const Eigen::MatrixXd& predicted,
                   double epsilon) {
  if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols())
    throw std::invalid_argument("mape: shape mismatch");
  if (actual.size() == 0) throw std::invalid_argument("mape: empty input");
  if (epsilon < 0.0) throw std::invalid_argument("mape: negative epsilon");

  double acc = 0.0;
  for (Eigen::Index i = 0; i < actual.rows(); ++i) {
    for (Eigen::Index j = 0; j < actual.cols(); ++j) {
      const double a = actual(i, j);
      const double denom = std::max(std::abs(a), epsilon);
      if (denom == 0.0)
        throw NumericError("mape: zero actual value with epsilon = 0");
      acc += std::abs(a - predicted(i, j)) / denom;
    }
  }
  return 100.0 * acc / static_cast<double>(actual.size());
}

inline double mape(const Eigen::MatrixXd& actual,
                   const Eigen::MatrixXd& predicted) {
  return mape(actual, predicted, default_mape_epsilon(actual));
}

/// Mean of squared elementwise differences, fixed accumulation order.
inline double mse(const Eigen::MatrixXd& actual,
                  const Eigen::MatrixXd& predicted) {
  if (actual.rows() != predicted.rows() || actual.cols() != predicted.cols())
    throw std::invalid_argument("mse: shape mismatch");
  if (actual.size() == 0) throw std::invalid_argument("mse: empty input");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < actual.rows(); ++i) {
    for (Eigen::Index j = 0; j < actual.cols(); ++j) {
      const double d = actual(i, j) - predicted(i, j);
      acc += d * d;
    }
  }
  return acc / static_cast<double>(actual.size());
}

}  // namespace uwchan
