// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/metrics.hpp"
#include "uwchan/models/dense.hpp"
#include "uwchan/models/forest.hpp"
#include "uwchan/models/gradcheck.hpp"
#include "uwchan/models/knn.hpp"
#include "uwchan/models/linear.hpp"
#include "uwchan/models/lstm.hpp"
#include "uwchan/models/trainer.hpp"

namespace uwchan {

enum class ModelKind : uint32_t {
  Linear = 1,
  Knn = 2,
  Forest = 3,
  Mlp = 4,
  Dnn4 = 5,
  Dnn6 = 6,
  Lstm2 = 7,
  Lstm6 = 8,
};

inline const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Linear: return "linreg";
    case ModelKind::Knn: return "knn";
    case ModelKind::Forest: return "rf";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Dnn4: return "dnn4";
    case ModelKind::Dnn6: return "dnn6";
    case ModelKind::Lstm2: return "lstm2";
    case ModelKind::Lstm6: return "lstm6";
  }
  throw std::invalid_argument("kind_name: unknown model kind");
}

inline ModelKind kind_from_name(const std::string& name) {
  if (name == "linreg" || name == "linear") return ModelKind::Linear;
  if (name == "knn") return ModelKind::Knn;
  if (name == "rf" || name == "forest") return ModelKind::Forest;
  if (name == "mlp") return ModelKind::Mlp;
  if (name == "dnn4" || name == "dnn") return ModelKind::Dnn4;
  if (name == "dnn6") return ModelKind::Dnn6;
  if (name == "lstm2" || name == "lstm") return ModelKind::Lstm2;
  if (name == "lstm6") return ModelKind::Lstm6;
  throw ConfigError("unknown model '" + name +
                    "'; valid: linreg knn rf mlp dnn4 dnn6 lstm2 lstm6");
}

inline bool is_sequence_model(ModelKind k) {
  return k == ModelKind::Lstm2 || k == ModelKind::Lstm6;
}
inline bool is_trained_by_gradient(ModelKind k) {
  return k == ModelKind::Mlp || k == ModelKind::Dnn4 || k == ModelKind::Dnn6 ||
         is_sequence_model(k);
}

struct ModelSpec {
  ModelKind kind = ModelKind::Linear;
  double ridge = 0.0;
  int k = 0;        // 0 = select on the validation split from {1,3,5,9}
  ForestHyper forest;
  int hidden = 0;   // 0 = family default (256 dense, 320 LSTM)
  int window = 4;   // N_T for sequence models
  TrainHyper train;
};

inline int dense_layer_count(ModelKind k) {
  switch (k) {
    case ModelKind::Mlp: return 2;   // one hidden + output
    case ModelKind::Dnn4: return 4;  // three hidden + output
    case ModelKind::Dnn6: return 6;  // five hidden + output
    default: throw std::invalid_argument("dense_layer_count: not a dense kind");
  }
}

inline int lstm_layer_count(ModelKind k) {
  switch (k) {
    case ModelKind::Lstm2: return 2;
    case ModelKind::Lstm6: return 6;
    default: throw std::invalid_argument("lstm_layer_count: not an LSTM kind");
  }
}

inline int effective_hidden(const ModelSpec& spec) {
  if (spec.hidden > 0) return spec.hidden;
  return is_sequence_model(spec.kind) ? 320 : 256;
}

/// Trained state for any of the six regressors, plus everything needed to
/// reproduce its evaluation: normalization statistics, split and window
/// settings, and the loss curve when gradient-trained.
struct TrainedModel {
  ModelSpec spec;
  NormStats stats;
  SplitSpec split_spec;
  std::string scenario;
  int n_s = 0;
  std::variant<LinearParams, NeighborStore, ForestParams, DenseNet, LstmNet>
      params;
  LossCurve curve;
};

/// Fit any model on (normalized) train/val splits. The inputs here are raw;
/// normalization statistics are computed from the train split and stored.
inline TrainedModel fit_model(const ModelSpec& spec, const Dataset& train_raw,
                              const Dataset& val_raw,
                              const SplitSpec& split_spec = {}) {
  TrainedModel model;
  model.spec = spec;
  model.split_spec = split_spec;
  model.scenario = train_raw.meta.scenario;
  model.n_s = static_cast<int>(train_raw.frame_len());
  model.stats = compute_norm_stats(train_raw);
  const Dataset train = normalize(train_raw, model.stats);
  const Dataset val = normalize(val_raw, model.stats);

  switch (spec.kind) {
    case ModelKind::Linear:
      model.params = linreg_fit(train, spec.ridge);
      break;
    case ModelKind::Knn: {
      int k = spec.k;
      if (k <= 0)
        k = knn_select_k(train, val, {1, 3, 5, 9},
                         default_mape_epsilon(val.Y));
      model.spec.k = k;
      model.params = knn_fit(train, k);
      break;
    }
    case ModelKind::Forest: {
      ForestHyper hyper = spec.forest;
      if (hyper.seed == 0) hyper.seed = mix_seed(spec.train.seed, 0x666f7265);
      model.spec.forest = hyper;
      model.params = rf_fit(train, hyper);
      break;
    }
    case ModelKind::Mlp:
    case ModelKind::Dnn4:
    case ModelKind::Dnn6: {
      DenseNet net = make_dense_net(train.frame_len(), train.frame_len(),
                                    effective_hidden(spec),
                                    dense_layer_count(spec.kind),
                                    mix_seed(spec.train.seed, 0x696e6974));
      model.curve = train_dense(net, train, val, spec.train);
      model.params = std::move(net);
      break;
    }
    case ModelKind::Lstm2:
    case ModelKind::Lstm6: {
      if (spec.window < 1)
        throw std::invalid_argument("fit_model: window must be >= 1");
      LstmNet net = make_lstm_net(train.frame_len(), train.frame_len(),
                                  effective_hidden(spec),
                                  lstm_layer_count(spec.kind),
                                  mix_seed(spec.train.seed, 0x696e6974));
      const WindowedDataset wtrain = window_dataset(train, spec.window);
      const WindowedDataset wval = window_dataset(val, spec.window);
      model.curve = train_lstm(net, wtrain, wval, spec.train);
      model.params = std::move(net);
      break;
    }
  }
  return model;
}

/// Predict received frames from raw transmitted frames. Sequence models
/// consume sliding windows, so their output has window-1 fewer rows; row i
/// of the result is aligned with input row i + window - 1.
inline Eigen::MatrixXd predict_frames(const TrainedModel& model,
                                      const Eigen::MatrixXd& x_raw) {
  if (x_raw.cols() != model.n_s)
    throw std::invalid_argument("predict_frames: frame length mismatch");
  const Eigen::MatrixXd x = normalize_inputs(x_raw, model.stats);

  Eigen::MatrixXd pred;
  if (const auto* lin = std::get_if<LinearParams>(&model.params)) {
    pred = linreg_predict(*lin, x);
  } else if (const auto* store = std::get_if<NeighborStore>(&model.params)) {
    pred = knn_predict(*store, x);
  } else if (const auto* forest = std::get_if<ForestParams>(&model.params)) {
    pred = rf_predict(*forest, x);
  } else if (const auto* dense = std::get_if<DenseNet>(&model.params)) {
    pred = dense_forward(*dense, x);
  } else {
    const auto& lstm = std::get<LstmNet>(model.params);
    const int w = model.spec.window;
    if (x.rows() < w)
      throw std::invalid_argument("predict_frames: fewer rows than the window");
    const Eigen::Index n_windows = x.rows() - w + 1;
    std::vector<Eigen::MatrixXd> steps(
        static_cast<std::size_t>(w), Eigen::MatrixXd(n_windows, x.cols()));
    for (int t = 0; t < w; ++t)
      for (Eigen::Index i = 0; i < n_windows; ++i)
        steps[static_cast<std::size_t>(t)].row(i) = x.row(i + t);
    pred = lstm_forward(lstm, steps);
  }
  return denormalize_labels(pred, model.stats);
}

/// Number of leading label rows a model cannot predict (window warm-up).
inline Eigen::Index prediction_offset(const TrainedModel& model) {
  return is_sequence_model(model.spec.kind) ? model.spec.window - 1 : 0;
}

/// Spec'd verification harness: max relative gradient error on a shrunk
/// architecture over a toy dataset.
inline double grad_check(const ModelSpec& spec, const Dataset& toy, double step,
                         bool inject_fault = false) {
  if (!is_trained_by_gradient(spec.kind))
    throw std::invalid_argument("grad_check: model has no gradients");
  const int hidden = spec.hidden > 0 ? spec.hidden : 8;
  if (is_sequence_model(spec.kind)) {
    LstmNet net =
        make_lstm_net(toy.frame_len(), toy.frame_len(), hidden,
                      lstm_layer_count(spec.kind), mix_seed(spec.train.seed, 1));
    const WindowedDataset w = window_dataset(toy, spec.window);
    std::vector<Eigen::Index> starts(static_cast<std::size_t>(w.count()));
    for (Eigen::Index i = 0; i < w.count(); ++i)
      starts[static_cast<std::size_t>(i)] = i;
    return grad_check_lstm(net, detail::gather_steps(w, starts),
                           detail::gather_labels(w, starts), step,
                           inject_fault);
  }
  DenseNet net =
      make_dense_net(toy.frame_len(), toy.frame_len(), hidden,
                     dense_layer_count(spec.kind), mix_seed(spec.train.seed, 1));
  return grad_check_dense(net, toy.X, toy.Y, step, inject_fault);
}

}  // namespace uwchan
