// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/errors.hpp"
#include "uwchan/models/adam.hpp"
#include "uwchan/rng.hpp"

namespace uwchan {

enum class Activation : uint8_t { None = 0, ReLU = 1 };

struct DenseLayerParams {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;  // out
  Activation act = Activation::None;
};

/// Plain fully connected stack. The MLP preset is one 256-wide ReLU hidden
/// layer; the deep presets use three or five hidden layers ahead of the
/// linear output layer.
struct DenseNet {
  std::vector<DenseLayerParams> layers;

  Eigen::Index in_dim() const { return layers.front().W.cols(); }
  Eigen::Index out_dim() const { return layers.back().W.rows(); }
};

struct DenseCache {
  std::vector<Eigen::MatrixXd> acts;  // acts[0] = input, acts[l+1] = layer l out
};

struct DenseGrads {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

/// Glorot-uniform init: W ~ U(+-sqrt(6/(fan_in+fan_out))), zero biases.
inline DenseLayerParams make_dense_layer(Eigen::Index in, Eigen::Index out,
                                         Activation act, Rng& rng) {
  DenseLayerParams layer;
  layer.W.resize(out, in);
  const double a = std::sqrt(6.0 / static_cast<double>(in + out));
  for (Eigen::Index r = 0; r < out; ++r)
    for (Eigen::Index c = 0; c < in; ++c) layer.W(r, c) = rng.uniform(-a, a);
  layer.b = Eigen::VectorXd::Zero(out);
  layer.act = act;
  return layer;
}

/// n_layers counts every dense layer including the linear output layer.
inline DenseNet make_dense_net(Eigen::Index in, Eigen::Index out,
                               Eigen::Index hidden, int n_layers,
                               uint64_t seed) {
  if (n_layers < 1)
    throw std::invalid_argument("make_dense_net: need at least one layer");
  Rng rng(seed);
  DenseNet net;
  Eigen::Index cur = in;
  for (int l = 0; l + 1 < n_layers; ++l) {
    net.layers.push_back(make_dense_layer(cur, hidden, Activation::ReLU, rng));
    cur = hidden;
  }
  net.layers.push_back(make_dense_layer(cur, out, Activation::None, rng));
  return net;
}

inline Eigen::MatrixXd dense_forward(const DenseNet& net,
                                     const Eigen::MatrixXd& X,
                                     DenseCache* cache = nullptr) {
  if (net.layers.empty()) throw std::invalid_argument("dense_forward: empty net");
  if (X.cols() != net.in_dim())
    throw std::invalid_argument("dense_forward: input width mismatch");
  if (cache) {
    cache->acts.clear();
    cache->acts.reserve(net.layers.size() + 1);
    cache->acts.push_back(X);
  }
  Eigen::MatrixXd a = X;
  for (const DenseLayerParams& layer : net.layers) {
    Eigen::MatrixXd z = (a * layer.W.transpose()).rowwise() + layer.b.transpose();
    if (layer.act == Activation::ReLU) z = z.cwiseMax(0.0);
    a = std::move(z);
    if (cache) cache->acts.push_back(a);
  }
  return a;
}

/// Exact gradients of the loss w.r.t. every W and b given dY = dL/d(output).
inline DenseGrads dense_backward(const DenseNet& net, const DenseCache& cache,
                                 const Eigen::MatrixXd& dY) {
  const std::size_t n_layers = net.layers.size();
  if (cache.acts.size() != n_layers + 1)
    throw std::invalid_argument("dense_backward: cache/net layer mismatch");
  if (dY.rows() != cache.acts.back().rows() ||
      dY.cols() != cache.acts.back().cols())
    throw std::invalid_argument("dense_backward: dY shape mismatch");

  DenseGrads g;
  g.dW.resize(n_layers);
  g.db.resize(n_layers);
  Eigen::MatrixXd delta = dY;
  for (std::size_t l = n_layers; l-- > 0;) {
    const DenseLayerParams& layer = net.layers[l];
    if (layer.act == Activation::ReLU) {
      // relu'(z) = [z > 0]; post-activation output is 0 exactly where z <= 0
      delta = delta.cwiseProduct(
          (cache.acts[l + 1].array() > 0.0).cast<double>().matrix());
    }
    g.dW[l].noalias() = delta.transpose() * cache.acts[l];
    g.db[l] = delta.colwise().sum().transpose();
    if (l > 0) delta = delta * layer.W;
  }
  return g;
}

inline std::vector<ParamRef> dense_param_refs(DenseNet& net) {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    refs.push_back({"dense" + std::to_string(l) + ".W", net.layers[l].W.data(),
                    net.layers[l].W.size()});
    refs.push_back({"dense" + std::to_string(l) + ".b", net.layers[l].b.data(),
                    net.layers[l].b.size()});
  }
  return refs;
}

inline std::vector<ParamRef> dense_grad_refs(DenseGrads& g) {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < g.dW.size(); ++l) {
    refs.push_back({"dense" + std::to_string(l) + ".W", g.dW[l].data(),
                    g.dW[l].size()});
    refs.push_back({"dense" + std::to_string(l) + ".b", g.db[l].data(),
                    g.db[l].size()});
  }
  return refs;
}

}  // namespace uwchan
