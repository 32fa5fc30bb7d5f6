// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "uwchan/binio.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/models/model.hpp"

namespace uwchan {

// Checkpoint format: magic "UWAM", u32 version, u32 model kind, then the
// metadata and parameter payload; trailing u64 byte-sum of everything after
// the 12-byte prefix.
inline constexpr uint32_t kCheckpointVersion = 1;

namespace detail {

inline void put_string(BinWriter& w, const std::string& s) {
  w.u32(static_cast<uint32_t>(s.size()));
  w.bytes(s.data(), s.size());
}

inline std::string get_string(BinReader& r) {
  const uint32_t n = r.u32();
  std::string s(n, '\0');
  r.bytes(s.data(), n);
  return s;
}

inline void put_matrix(BinWriter& w, const Eigen::MatrixXd& m) {
  w.u64(static_cast<uint64_t>(m.rows()));
  w.u64(static_cast<uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) w.f64(m(i, j));
}

inline Eigen::MatrixXd get_matrix(BinReader& r) {
  const uint64_t rows = r.u64();
  const uint64_t cols = r.u64();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64();
  return m;
}

inline void put_vector(BinWriter& w, const Eigen::VectorXd& v) {
  w.u64(static_cast<uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) w.f64(v[i]);
}

inline Eigen::VectorXd get_vector(BinReader& r) {
  const uint64_t n = r.u64();
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f64();
  return v;
}

inline void put_dense_layer(BinWriter& w, const DenseLayerParams& l) {
  w.u8(static_cast<uint8_t>(l.act));
  put_matrix(w, l.W);
  put_vector(w, l.b);
}

inline DenseLayerParams get_dense_layer(BinReader& r) {
  DenseLayerParams l;
  l.act = static_cast<Activation>(r.u8());
  l.W = get_matrix(r);
  l.b = get_vector(r);
  return l;
}

}  // namespace detail

inline void save_model(const TrainedModel& model, const std::string& path) {
  BinWriter w(path);
  w.bytes("UWAM", 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<uint32_t>(model.spec.kind));
  w.reset_checksum();

  detail::put_string(w, model.scenario);
  w.u32(static_cast<uint32_t>(model.n_s));
  w.f64(model.stats.mean_x);
  w.f64(model.stats.std_x);
  w.f64(model.stats.mean_y);
  w.f64(model.stats.std_y);
  w.f64(model.split_spec.train_frac);
  w.f64(model.split_spec.val_frac);
  w.f64(model.split_spec.test_frac);
  w.u64(model.split_spec.seed);

  w.f64(model.spec.ridge);
  w.u32(static_cast<uint32_t>(model.spec.k));
  w.u32(static_cast<uint32_t>(model.spec.forest.n_trees));
  w.u32(static_cast<uint32_t>(model.spec.forest.max_depth));
  w.u32(static_cast<uint32_t>(model.spec.forest.min_leaf));
  w.f64(model.spec.forest.feature_fraction);
  w.u8(model.spec.forest.bootstrap ? 1 : 0);
  w.u64(model.spec.forest.seed);
  w.u32(static_cast<uint32_t>(model.spec.hidden));
  w.u32(static_cast<uint32_t>(model.spec.window));
  w.f64(model.spec.train.lr);
  w.u32(static_cast<uint32_t>(model.spec.train.batch));
  w.u32(static_cast<uint32_t>(model.spec.train.epochs));
  w.u64(model.spec.train.seed);

  w.u32(static_cast<uint32_t>(model.curve.train_loss.size()));
  for (std::size_t e = 0; e < model.curve.train_loss.size(); ++e) {
    w.f64(model.curve.train_loss[e]);
    w.f64(model.curve.val_loss[e]);
  }

  switch (model.spec.kind) {
    case ModelKind::Linear: {
      const auto& p = std::get<LinearParams>(model.params);
      detail::put_matrix(w, p.W);
      detail::put_vector(w, p.b);
      w.f64(p.ridge);
      break;
    }
    case ModelKind::Knn: {
      const auto& p = std::get<NeighborStore>(model.params);
      w.u32(static_cast<uint32_t>(p.k));
      detail::put_matrix(w, p.X);
      detail::put_matrix(w, p.Y);
      break;
    }
    case ModelKind::Forest: {
      const auto& p = std::get<ForestParams>(model.params);
      w.u64(static_cast<uint64_t>(p.n_features));
      w.u32(static_cast<uint32_t>(p.trees.size()));
      for (const RegressionTree& t : p.trees) {
        w.u32(static_cast<uint32_t>(t.nodes.size()));
        for (const TreeNode& n : t.nodes) {
          w.u32(static_cast<uint32_t>(n.feature + 1));
          w.f64(n.threshold);
          w.u32(static_cast<uint32_t>(n.left + 1));
          w.u32(static_cast<uint32_t>(n.right + 1));
          w.u32(static_cast<uint32_t>(n.leaf + 1));
        }
        detail::put_matrix(w, t.leaf_values);
      }
      break;
    }
    case ModelKind::Mlp:
    case ModelKind::Dnn4:
    case ModelKind::Dnn6: {
      const auto& p = std::get<DenseNet>(model.params);
      w.u32(static_cast<uint32_t>(p.layers.size()));
      for (const DenseLayerParams& l : p.layers) detail::put_dense_layer(w, l);
      break;
    }
    case ModelKind::Lstm2:
    case ModelKind::Lstm6: {
      const auto& p = std::get<LstmNet>(model.params);
      w.u32(static_cast<uint32_t>(p.layers.size()));
      for (const LstmLayerParams& l : p.layers) {
        detail::put_matrix(w, l.Wf);
        detail::put_matrix(w, l.Wi);
        detail::put_matrix(w, l.Wo);
        detail::put_matrix(w, l.Wc);
        detail::put_vector(w, l.bf);
        detail::put_vector(w, l.bi);
        detail::put_vector(w, l.bo);
        detail::put_vector(w, l.bc);
      }
      detail::put_dense_layer(w, p.head);
      break;
    }
  }
  w.commit_with_checksum();
}

inline TrainedModel load_model(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::string(magic, 4) != "UWAM")
    throw FormatError(path + ": bad magic at offset 0");
  const uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported version " + std::to_string(version));
  const uint32_t kind_tag = r.u32();
  if (kind_tag < 1 || kind_tag > 8)
    throw FormatError(path + ": unknown model kind " + std::to_string(kind_tag));
  r.reset_checksum();

  TrainedModel m;
  m.spec.kind = static_cast<ModelKind>(kind_tag);
  m.scenario = detail::get_string(r);
  m.n_s = static_cast<int>(r.u32());
  m.stats.mean_x = r.f64();
  m.stats.std_x = r.f64();
  m.stats.mean_y = r.f64();
  m.stats.std_y = r.f64();
  m.split_spec.train_frac = r.f64();
  m.split_spec.val_frac = r.f64();
  m.split_spec.test_frac = r.f64();
  m.split_spec.seed = r.u64();

  m.spec.ridge = r.f64();
  m.spec.k = static_cast<int>(r.u32());
  m.spec.forest.n_trees = static_cast<int>(r.u32());
  m.spec.forest.max_depth = static_cast<int>(r.u32());
  m.spec.forest.min_leaf = static_cast<int>(r.u32());
  m.spec.forest.feature_fraction = r.f64();
  m.spec.forest.bootstrap = r.u8() != 0;
  m.spec.forest.seed = r.u64();
  m.spec.hidden = static_cast<int>(r.u32());
  m.spec.window = static_cast<int>(r.u32());
  m.spec.train.lr = r.f64();
  m.spec.train.batch = static_cast<int>(r.u32());
  m.spec.train.epochs = static_cast<int>(r.u32());
  m.spec.train.seed = r.u64();

  const uint32_t curve_len = r.u32();
  m.curve.train_loss.resize(curve_len);
  m.curve.val_loss.resize(curve_len);
  for (uint32_t e = 0; e < curve_len; ++e) {
    m.curve.train_loss[e] = r.f64();
    m.curve.val_loss[e] = r.f64();
  }

  switch (m.spec.kind) {
    case ModelKind::Linear: {
      LinearParams p;
      p.W = detail::get_matrix(r);
      p.b = detail::get_vector(r);
      p.ridge = r.f64();
      m.params = std::move(p);
      break;
    }
    case ModelKind::Knn: {
      NeighborStore p;
      p.k = static_cast<int>(r.u32());
      p.X = detail::get_matrix(r);
      p.Y = detail::get_matrix(r);
      m.params = std::move(p);
      break;
    }
    case ModelKind::Forest: {
      ForestParams p;
      p.hyper = m.spec.forest;
      p.n_features = static_cast<Eigen::Index>(r.u64());
      const uint32_t n_trees = r.u32();
      p.trees.resize(n_trees);
      for (RegressionTree& t : p.trees) {
        const uint32_t n_nodes = r.u32();
        t.nodes.resize(n_nodes);
        for (TreeNode& n : t.nodes) {
          n.feature = static_cast<int>(r.u32()) - 1;
          n.threshold = r.f64();
          n.left = static_cast<int>(r.u32()) - 1;
          n.right = static_cast<int>(r.u32()) - 1;
          n.leaf = static_cast<int>(r.u32()) - 1;
        }
        t.leaf_values = detail::get_matrix(r);
      }
      m.params = std::move(p);
      break;
    }
    case ModelKind::Mlp:
    case ModelKind::Dnn4:
    case ModelKind::Dnn6: {
      DenseNet p;
      const uint32_t n_layers = r.u32();
      p.layers.resize(n_layers);
      for (DenseLayerParams& l : p.layers) l = detail::get_dense_layer(r);
      m.params = std::move(p);
      break;
    }
    case ModelKind::Lstm2:
    case ModelKind::Lstm6: {
      LstmNet p;
      const uint32_t n_layers = r.u32();
      p.layers.resize(n_layers);
      for (LstmLayerParams& l : p.layers) {
        l.Wf = detail::get_matrix(r);
        l.Wi = detail::get_matrix(r);
        l.Wo = detail::get_matrix(r);
        l.Wc = detail::get_matrix(r);
        l.bf = detail::get_vector(r);
        l.bi = detail::get_vector(r);
        l.bo = detail::get_vector(r);
        l.bc = detail::get_vector(r);
      }
      p.head = detail::get_dense_layer(r);
      m.params = std::move(p);
      break;
    }
  }
  const uint64_t expect = r.checksum();
  const uint64_t stored = r.u64();
  if (stored != expect)
    throw FormatError(path + ": checksum mismatch");
  return m;
}

}  // namespace uwchan
