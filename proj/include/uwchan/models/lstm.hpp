// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/errors.hpp"
#include "uwchan/models/dense.hpp"
#include "uwchan/rng.hpp"

namespace uwchan {

/// One LSTM layer; each gate has its own weights over the concatenated
/// [h_{t-1}, x_t] and its own bias:
///   f_t = sig(W_f [h,x] + b_f)      i_t = sig(W_i [h,x] + b_i)
///   o_t = sig(W_o [h,x] + b_o)      c'_t = tanh(W_c [h,x] + b_c)
///   c_t = f_t * c_{t-1} + i_t * c'_t    h_t = o_t * tanh(c_t)
struct LstmLayerParams {
  Eigen::MatrixXd Wf, Wi, Wo, Wc;  // hidden x (hidden + input)
  Eigen::VectorXd bf, bi, bo, bc;  // hidden

  Eigen::Index hidden() const { return Wf.rows(); }
  Eigen::Index input() const { return Wf.cols() - Wf.rows(); }
};

/// Per-step values saved for backpropagation through time.
struct LstmCellCache {
  Eigen::MatrixXd cat;  // B x (hidden+input), [h_prev, x_t]
  Eigen::MatrixXd f, i, o, g;
  Eigen::MatrixXd c, tanh_c;
};

inline Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
  return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

/// Single cell step on a batch; returns (h_t, c_t).
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lstm_cell(
    const LstmLayerParams& p, const Eigen::MatrixXd& x_t,
    const Eigen::MatrixXd& h_prev, const Eigen::MatrixXd& c_prev,
    LstmCellCache* cache = nullptr) {
  const Eigen::Index hid = p.hidden();
  const Eigen::Index in = p.input();
  if (x_t.cols() != in || h_prev.cols() != hid || c_prev.cols() != hid ||
      x_t.rows() != h_prev.rows() || h_prev.rows() != c_prev.rows())
    throw std::invalid_argument("lstm_cell: shape mismatch");

  Eigen::MatrixXd cat(x_t.rows(), hid + in);
  cat << h_prev, x_t;
  Eigen::MatrixXd f = sigmoid(((cat * p.Wf.transpose()).rowwise() + p.bf.transpose()));
  Eigen::MatrixXd i = sigmoid(((cat * p.Wi.transpose()).rowwise() + p.bi.transpose()));
  Eigen::MatrixXd o = sigmoid(((cat * p.Wo.transpose()).rowwise() + p.bo.transpose()));
  Eigen::MatrixXd g = ((cat * p.Wc.transpose()).rowwise() + p.bc.transpose())
                          .array()
                          .tanh()
                          .matrix();
  Eigen::MatrixXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(g);
  Eigen::MatrixXd tanh_c = c.array().tanh().matrix();
  Eigen::MatrixXd h = o.cwiseProduct(tanh_c);
  if (cache) {
    cache->cat = std::move(cat);
    cache->f = std::move(f);
    cache->i = std::move(i);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->c = c;
    cache->tanh_c = std::move(tanh_c);
  }
  return {std::move(h), std::move(c)};
}

/// Stacked unidirectional LSTM with a linear output head fed by the top
/// layer's final hidden state.
struct LstmNet {
  std::vector<LstmLayerParams> layers;
  DenseLayerParams head;

  Eigen::Index hidden() const { return layers.front().hidden(); }
  Eigen::Index in_dim() const { return layers.front().input(); }
  Eigen::Index out_dim() const { return head.W.rows(); }
};

/// LSTM weights U(-0.08, 0.08) with zero biases; Glorot head.
inline LstmNet make_lstm_net(Eigen::Index in, Eigen::Index out,
                             Eigen::Index hidden, int n_layers, uint64_t seed) {
  if (n_layers < 1)
    throw std::invalid_argument("make_lstm_net: need at least one layer");
  Rng rng(seed);
  LstmNet net;
  Eigen::Index cur = in;
  for (int l = 0; l < n_layers; ++l) {
    LstmLayerParams p;
    auto init = [&](Eigen::MatrixXd& W) {
      W.resize(hidden, hidden + cur);
      for (Eigen::Index r = 0; r < W.rows(); ++r)
        for (Eigen::Index c = 0; c < W.cols(); ++c)
          W(r, c) = rng.uniform(-0.08, 0.08);
    };
    init(p.Wf);
    init(p.Wi);
    init(p.Wo);
    init(p.Wc);
    p.bf = Eigen::VectorXd::Zero(hidden);
    p.bi = Eigen::VectorXd::Zero(hidden);
    p.bo = Eigen::VectorXd::Zero(hidden);
    p.bc = Eigen::VectorXd::Zero(hidden);
    net.layers.push_back(std::move(p));
    cur = hidden;
  }
  net.head = make_dense_layer(hidden, out, Activation::None, rng);
  return net;
}

struct LstmCache {
  // steps[l][t] for layer l at time t; c_prev at t=0 is zero.
  std::vector<std::vector<LstmCellCache>> steps;
  Eigen::MatrixXd last_h;  // head input
};

/// Unroll over the window; zero initial states; only the last step's top
/// hidden state feeds the output head.
inline Eigen::MatrixXd lstm_forward(const LstmNet& net,
                                    const std::vector<Eigen::MatrixXd>& x_steps,
                                    LstmCache* cache = nullptr) {
  if (x_steps.empty()) throw std::invalid_argument("lstm_forward: N_T = 0");
  const Eigen::Index batch = x_steps.front().rows();
  for (const Eigen::MatrixXd& x : x_steps)
    if (x.rows() != batch || x.cols() != net.in_dim())
      throw std::invalid_argument("lstm_forward: step shape mismatch");

  if (cache) {
    cache->steps.assign(net.layers.size(), {});
    for (auto& v : cache->steps) v.resize(x_steps.size());
  }
  std::vector<Eigen::MatrixXd> cur = x_steps;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const LstmLayerParams& p = net.layers[l];
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(batch, p.hidden());
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(batch, p.hidden());
    for (std::size_t t = 0; t < cur.size(); ++t) {
      auto [h_next, c_next] =
          lstm_cell(p, cur[t], h, c, cache ? &cache->steps[l][t] : nullptr);
      h = std::move(h_next);
      c = std::move(c_next);
      cur[t] = h;  // layer output becomes next layer's input
    }
  }
  const Eigen::MatrixXd& last_h = cur.back();
  if (cache) cache->last_h = last_h;
  return (last_h * net.head.W.transpose()).rowwise() + net.head.b.transpose();
}

struct LstmGrads {
  struct Layer {
    Eigen::MatrixXd dWf, dWi, dWo, dWc;
    Eigen::VectorXd dbf, dbi, dbo, dbc;
  };
  std::vector<Layer> layers;
  Eigen::MatrixXd dW_head;
  Eigen::VectorXd db_head;
};

/// Full backpropagation through time given dY = dL/d(head output).
inline LstmGrads lstm_backward(const LstmNet& net, const LstmCache& cache,
                               const std::vector<Eigen::MatrixXd>& x_steps,
                               const Eigen::MatrixXd& dY) {
  const std::size_t n_layers = net.layers.size();
  const std::size_t n_t = x_steps.size();
  if (cache.steps.size() != n_layers)
    throw std::invalid_argument("lstm_backward: cache mismatch");
  const Eigen::Index batch = dY.rows();

  LstmGrads g;
  g.layers.resize(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    const LstmLayerParams& p = net.layers[l];
    g.layers[l].dWf = Eigen::MatrixXd::Zero(p.Wf.rows(), p.Wf.cols());
    g.layers[l].dWi = Eigen::MatrixXd::Zero(p.Wi.rows(), p.Wi.cols());
    g.layers[l].dWo = Eigen::MatrixXd::Zero(p.Wo.rows(), p.Wo.cols());
    g.layers[l].dWc = Eigen::MatrixXd::Zero(p.Wc.rows(), p.Wc.cols());
    g.layers[l].dbf = Eigen::VectorXd::Zero(p.hidden());
    g.layers[l].dbi = Eigen::VectorXd::Zero(p.hidden());
    g.layers[l].dbo = Eigen::VectorXd::Zero(p.hidden());
    g.layers[l].dbc = Eigen::VectorXd::Zero(p.hidden());
  }

  g.dW_head.noalias() = dY.transpose() * cache.last_h;
  g.db_head = dY.colwise().sum().transpose();

  // d(output of layer l at step t); top layer only receives the head grad
  // at the last step.
  std::vector<Eigen::MatrixXd> d_out(
      n_t, Eigen::MatrixXd::Zero(batch, net.layers.back().hidden()));
  d_out[n_t - 1] = dY * net.head.W;

  for (std::size_t l = n_layers; l-- > 0;) {
    const LstmLayerParams& p = net.layers[l];
    const Eigen::Index hid = p.hidden();
    const Eigen::Index in = p.input();
    std::vector<Eigen::MatrixXd> d_in(n_t);
    Eigen::MatrixXd dh_carry = Eigen::MatrixXd::Zero(batch, hid);
    Eigen::MatrixXd dc_carry = Eigen::MatrixXd::Zero(batch, hid);
    for (std::size_t t = n_t; t-- > 0;) {
      const LstmCellCache& s = cache.steps[l][t];
      const Eigen::MatrixXd dh = d_out[t] + dh_carry;
      const Eigen::MatrixXd dc =
          (dc_carry.array() +
           dh.array() * s.o.array() * (1.0 - s.tanh_c.array().square()))
              .matrix();
      const Eigen::MatrixXd c_prev =
          t == 0 ? Eigen::MatrixXd::Zero(batch, hid).eval()
                 : cache.steps[l][t - 1].c;
      const Eigen::MatrixXd d_zo =
          (dh.array() * s.tanh_c.array() * s.o.array() * (1.0 - s.o.array()))
              .matrix();
      const Eigen::MatrixXd d_zf =
          (dc.array() * c_prev.array() * s.f.array() * (1.0 - s.f.array()))
              .matrix();
      const Eigen::MatrixXd d_zi =
          (dc.array() * s.g.array() * s.i.array() * (1.0 - s.i.array()))
              .matrix();
      const Eigen::MatrixXd d_zg =
          (dc.array() * s.i.array() * (1.0 - s.g.array().square())).matrix();

      g.layers[l].dWf.noalias() += d_zf.transpose() * s.cat;
      g.layers[l].dWi.noalias() += d_zi.transpose() * s.cat;
      g.layers[l].dWo.noalias() += d_zo.transpose() * s.cat;
      g.layers[l].dWc.noalias() += d_zg.transpose() * s.cat;
      g.layers[l].dbf += d_zf.colwise().sum().transpose();
      g.layers[l].dbi += d_zi.colwise().sum().transpose();
      g.layers[l].dbo += d_zo.colwise().sum().transpose();
      g.layers[l].dbc += d_zg.colwise().sum().transpose();

      Eigen::MatrixXd d_cat = d_zf * p.Wf + d_zi * p.Wi + d_zo * p.Wo +
                              d_zg * p.Wc;
      dh_carry = d_cat.leftCols(hid);
      d_in[t] = d_cat.rightCols(in);
      dc_carry = dc.cwiseProduct(s.f);
    }
    d_out = std::move(d_in);  // feeds the layer below
  }
  return g;
}

inline std::vector<ParamRef> lstm_param_refs(LstmNet& net) {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    LstmLayerParams& p = net.layers[l];
    const std::string pre = "lstm" + std::to_string(l) + ".";
    refs.push_back({pre + "Wf", p.Wf.data(), p.Wf.size()});
    refs.push_back({pre + "Wi", p.Wi.data(), p.Wi.size()});
    refs.push_back({pre + "Wo", p.Wo.data(), p.Wo.size()});
    refs.push_back({pre + "Wc", p.Wc.data(), p.Wc.size()});
    refs.push_back({pre + "bf", p.bf.data(), p.bf.size()});
    refs.push_back({pre + "bi", p.bi.data(), p.bi.size()});
    refs.push_back({pre + "bo", p.bo.data(), p.bo.size()});
    refs.push_back({pre + "bc", p.bc.data(), p.bc.size()});
  }
  refs.push_back({"head.W", net.head.W.data(), net.head.W.size()});
  refs.push_back({"head.b", net.head.b.data(), net.head.b.size()});
  return refs;
}

inline std::vector<ParamRef> lstm_grad_refs(LstmGrads& g) {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < g.layers.size(); ++l) {
    LstmGrads::Layer& gl = g.layers[l];
    const std::string pre = "lstm" + std::to_string(l) + ".";
    refs.push_back({pre + "Wf", gl.dWf.data(), gl.dWf.size()});
    refs.push_back({pre + "Wi", gl.dWi.data(), gl.dWi.size()});
    refs.push_back({pre + "Wo", gl.dWo.data(), gl.dWo.size()});
    refs.push_back({pre + "Wc", gl.dWc.data(), gl.dWc.size()});
    refs.push_back({pre + "bf", gl.dbf.data(), gl.dbf.size()});
    refs.push_back({pre + "bi", gl.dbi.data(), gl.dbi.size()});
    refs.push_back({pre + "bo", gl.dbo.data(), gl.dbo.size()});
    refs.push_back({pre + "bc", gl.dbc.data(), gl.dbc.size()});
  }
  refs.push_back({"head.W", g.dW_head.data(), g.dW_head.size()});
  refs.push_back({"head.b", g.db_head.data(), g.db_head.size()});
  return refs;
}

}  // namespace uwchan
