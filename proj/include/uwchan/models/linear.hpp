// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"

namespace uwchan {

/// Multi-output affine regressor: prediction = W x + b per frame.
struct LinearParams {
  Eigen::MatrixXd W;  // N_S x N_S
  Eigen::VectorXd b;  // N_S
  double ridge = 0.0;
};

/// Least squares fit of W, b minimizing |X W' + 1 b' - Y|^2 + ridge |W|^2.
/// ridge > 0 solves the normal equations with an LDLT factorization (the
/// bias column is not penalized). ridge = 0 uses a rank-revealing complete
/// orthogonal decomposition and returns the minimum-norm least-squares
/// solution; frame matrices of band-limited waveforms are always numerically
/// rank-deficient, so a plain normal-equation solve would be unusable there.
inline LinearParams linreg_fit(const Eigen::MatrixXd& X,
                               const Eigen::MatrixXd& Y, double ridge) {
  if (X.rows() != Y.rows())
    throw std::invalid_argument("linreg_fit: X and Y row counts differ");
  if (X.rows() == 0) throw std::invalid_argument("linreg_fit: empty data");
  if (ridge < 0.0) throw std::invalid_argument("linreg_fit: negative ridge");
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (ridge == 0.0 && n < d)
    throw std::invalid_argument(
        "linreg_fit: underdetermined with ridge = 0; need N_X >= N_S or "
        "ridge > 0");

  Eigen::MatrixXd A(n, d + 1);
  A.leftCols(d) = X;
  A.col(d).setOnes();

  Eigen::MatrixXd theta;  // (d+1) x outputs
  if (ridge > 0.0) {
    Eigen::MatrixXd G = A.transpose() * A;
    G.diagonal().head(d).array() += ridge;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    if (ldlt.info() != Eigen::Success)
      throw NumericError("linreg_fit: LDLT factorization failed");
    theta = ldlt.solve(A.transpose() * Y);
    const double resid = (G * theta - A.transpose() * Y).norm();
    if (!std::isfinite(resid) || resid > 1e-6 * (1.0 + (A.transpose() * Y).norm()))
      throw NumericError(
          "linreg_fit: singular normal equations; increase ridge");
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    theta = cod.solve(Y);
  }
  if (!theta.allFinite())
    throw NumericError("linreg_fit: non-finite solution; use ridge > 0");

  LinearParams p;
  p.W = theta.topRows(d).transpose();
  p.b = theta.row(d).transpose();
  p.ridge = ridge;
  return p;
}

inline LinearParams linreg_fit(const Dataset& train, double ridge) {
  return linreg_fit(train.X, train.Y, ridge);
}

inline Eigen::MatrixXd linreg_predict(const LinearParams& p,
                                      const Eigen::MatrixXd& X) {
  if (X.cols() != p.W.cols())
    throw std::invalid_argument("linreg_predict: feature count mismatch");
  return (X * p.W.transpose()).rowwise() + p.b.transpose();
}

}  // namespace uwchan
