// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/errors.hpp"

namespace uwchan {

/// A named view over one parameter tensor's storage; the trainer, Adam and
/// the gradient checker all address parameters through these.
struct ParamRef {
  std::string name;
  double* data = nullptr;
  Eigen::Index size = 0;
};

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Standard Adam with bias correction. Moment buffers are allocated on the
/// first step from the parameter shapes.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const { return cfg_; }
  long step_count() const { return t_; }

  void step(const std::vector<ParamRef>& params,
            const std::vector<ParamRef>& grads) {
    if (params.size() != grads.size())
      throw std::invalid_argument("adam_step: parameter/gradient count mismatch");
    if (m_.empty()) {
      m_.reserve(params.size());
      v_.reserve(params.size());
      for (const ParamRef& p : params) {
        m_.emplace_back(Eigen::ArrayXd::Zero(p.size));
        v_.emplace_back(Eigen::ArrayXd::Zero(p.size));
      }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].size != grads[i].size)
        throw std::invalid_argument("adam_step: shape mismatch for " +
                                    params[i].name);
      Eigen::Map<Eigen::ArrayXd> p(params[i].data, params[i].size);
      Eigen::Map<const Eigen::ArrayXd> g(grads[i].data, grads[i].size);
      if (!g.isFinite().all())
        throw NumericError("adam_step: non-finite gradient in " +
                           params[i].name);
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.square();
      p -= cfg_.lr * (m_[i] / bc1) / ((v_[i] / bc2).sqrt() + cfg_.eps);
    }
  }

 private:
  AdamConfig cfg_;
  std::vector<Eigen::ArrayXd> m_, v_;
  long t_ = 0;
};

/// Free-function form mirroring the state/params/grads calling convention.
inline void adam_step(AdamState& state, const std::vector<ParamRef>& params,
                      const std::vector<ParamRef>& grads) {
  state.step(params, grads);
}

}  // namespace uwchan
