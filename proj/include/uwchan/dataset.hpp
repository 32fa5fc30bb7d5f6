// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/binio.hpp"
#include "uwchan/errors.hpp"

namespace uwchan {

struct DatasetMeta {
  std::string scenario = "custom";
  uint64_t seed = 0;
  int n_s = 0;
  int message_period_symbols = 0;
  std::string preset_version = "1";
};

/// Paired transmit (X) and receive (Y) frames, one row per symbol frame.
struct Dataset {
  Eigen::MatrixXd X;  // N_X x N_S, transmitted
  Eigen::MatrixXd Y;  // N_X x N_S, received
  DatasetMeta meta;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index frame_len() const { return X.cols(); }
};

/// Sliding-window view for sequence models: sample i is X rows [i, i+N_T),
/// its label is Y row i+N_T-1 (target aligned to the last window element).
struct WindowedDataset {
  Eigen::MatrixXd X;  // shared source rows
  Eigen::MatrixXd Y;
  int window = 1;

  Eigen::Index count() const { return X.rows() - window + 1; }
  Eigen::Index frame_len() const { return X.cols(); }
  /// Window element t of sample i.
  auto window_row(Eigen::Index i, int t) const { return X.row(i + t); }
  auto label_row(Eigen::Index i) const { return Y.row(i + window - 1); }
};

struct SplitSpec {
  double train_frac = 0.8;
  double val_frac = 0.1;
  double test_frac = 0.1;
  uint64_t seed = 0;
};

struct NormStats {
  double mean_x = 0.0, std_x = 1.0;
  double mean_y = 0.0, std_y = 1.0;
};

inline Dataset build_dataset(const Eigen::MatrixXd& tx_frames,
                             const Eigen::MatrixXd& rx_frames,
                             DatasetMeta meta) {
  if (tx_frames.rows() != rx_frames.rows() ||
      tx_frames.cols() != rx_frames.cols())
    throw std::invalid_argument("build_dataset: shape mismatch between "
                                "transmit and receive frames");
  if (tx_frames.rows() == 0 || tx_frames.cols() == 0)
    throw std::invalid_argument("build_dataset: empty frame set");
  Dataset ds;
  ds.X = tx_frames;
  ds.Y = rx_frames;
  ds.meta = std::move(meta);
  ds.meta.n_s = static_cast<int>(tx_frames.cols());
  return ds;
}

inline WindowedDataset window_dataset(const Dataset& ds, int n_t) {
  if (n_t < 1 || n_t > ds.rows())
    throw std::invalid_argument("window_dataset: N_T must be in [1, N_X]");
  WindowedDataset w;
  w.X = ds.X;
  w.Y = ds.Y;
  w.window = n_t;
  return w;
}

/// Contiguous-in-time split; val and test sizes are floor(frac*N), the
/// remainder goes to train. Sequence models must not see future frames
/// during training, so rows are never shuffled here.
inline std::array<Dataset, 3> split(const Dataset& ds, const SplitSpec& spec) {
  auto frac_ok = [](double f) { return f > 0.0 && f < 1.0; };
  if (!frac_ok(spec.train_frac) || !frac_ok(spec.val_frac) ||
      !frac_ok(spec.test_frac))
    throw std::invalid_argument("split: fractions must be in (0,1)");
  if (std::abs(spec.train_frac + spec.val_frac + spec.test_frac - 1.0) > 1e-9)
    throw std::invalid_argument("split: fractions must sum to 1");

  const Eigen::Index n = ds.rows();
  const Eigen::Index n_val =
      static_cast<Eigen::Index>(std::floor(spec.val_frac * static_cast<double>(n)));
  const Eigen::Index n_test =
      static_cast<Eigen::Index>(std::floor(spec.test_frac * static_cast<double>(n)));
  const Eigen::Index n_train = n - n_val - n_test;
  if (n_train <= 0 || n_val <= 0 || n_test <= 0)
    throw std::invalid_argument("split: degenerate split (an empty part)");

  auto slice = [&](Eigen::Index start, Eigen::Index count) {
    Dataset part;
    part.X = ds.X.middleRows(start, count);
    part.Y = ds.Y.middleRows(start, count);
    part.meta = ds.meta;
    return part;
  };
  return {slice(0, n_train), slice(n_train, n_val),
          slice(n_train + n_val, n_test)};
}

/// Global scalar moments of a dataset's X and Y tensors. Per-sample-index
/// statistics are meaningless for a waveform, so one (mean, std) pair per
/// tensor. A zero-variance tensor gets scale 1 and a warning.
inline NormStats compute_norm_stats(const Dataset& train) {
  if (train.rows() == 0)
    throw std::invalid_argument("compute_norm_stats: empty dataset");
  NormStats s;
  s.mean_x = train.X.mean();
  s.mean_y = train.Y.mean();
  const double nx = static_cast<double>(train.X.size());
  const double ny = static_cast<double>(train.Y.size());
  const double var_x = (train.X.array() - s.mean_x).square().sum() / nx;
  const double var_y = (train.Y.array() - s.mean_y).square().sum() / ny;
  s.std_x = std::sqrt(var_x);
  s.std_y = std::sqrt(var_y);
  if (s.std_x == 0.0) {
    std::cerr << "warning: X has zero variance; scaling by 1\n";
    s.std_x = 1.0;
  }
  if (s.std_y == 0.0) {
    std::cerr << "warning: Y has zero variance; scaling by 1\n";
    s.std_y = 1.0;
  }
  return s;
}

inline Dataset normalize(const Dataset& ds, const NormStats& stats) {
  Dataset out;
  out.X = (ds.X.array() - stats.mean_x) / stats.std_x;
  out.Y = (ds.Y.array() - stats.mean_y) / stats.std_y;
  out.meta = ds.meta;
  return out;
}

/// Convenience: normalize by the dataset's own moments.
inline std::pair<Dataset, NormStats> normalize(const Dataset& ds) {
  NormStats stats = compute_norm_stats(ds);
  return {normalize(ds, stats), stats};
}

inline Eigen::MatrixXd denormalize_labels(const Eigen::MatrixXd& frames,
                                          const NormStats& stats) {
  return (frames.array() * stats.std_y + stats.mean_y).matrix();
}

inline Eigen::MatrixXd normalize_inputs(const Eigen::MatrixXd& frames,
                                        const NormStats& stats) {
  return ((frames.array() - stats.mean_x) / stats.std_x).matrix();
}

// On-disk format: magic "UWAC", u32 version=1, u64 N_X, u32 N_S,
// u8 dtype (1 = f64), all little-endian; X row-major, then Y row-major;
// trailing u64 byte-sum of the tensor payload.
inline constexpr uint32_t kDatasetVersion = 1;

inline void save(const Dataset& ds, const std::string& path) {
  BinWriter w(path);
  w.bytes("UWAC", 4);
  w.u32(kDatasetVersion);
  w.u64(static_cast<uint64_t>(ds.rows()));
  w.u32(static_cast<uint32_t>(ds.frame_len()));
  w.u8(1);  // dtype f64
  w.reset_checksum();
  for (Eigen::Index i = 0; i < ds.rows(); ++i)
    for (Eigen::Index j = 0; j < ds.frame_len(); ++j) w.f64(ds.X(i, j));
  for (Eigen::Index i = 0; i < ds.rows(); ++i)
    for (Eigen::Index j = 0; j < ds.frame_len(); ++j) w.f64(ds.Y(i, j));
  w.commit_with_checksum();
}

inline Dataset load(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (std::string(magic, 4) != "UWAC")
    throw FormatError(path + ": bad magic at offset 0");
  const uint32_t version = r.u32();
  if (version != kDatasetVersion)
    throw FormatError(path + ": unsupported version " +
                      std::to_string(version));
  const uint64_t n_x = r.u64();
  const uint32_t n_s = r.u32();
  const uint8_t dtype = r.u8();
  if (dtype != 1)
    throw FormatError(path + ": unsupported dtype " + std::to_string(dtype));
  const uint64_t payload = 2 * n_x * static_cast<uint64_t>(n_s) * 8;
  r.need(payload + 8);  // tensors + checksum

  Dataset ds;
  ds.meta.n_s = static_cast<int>(n_s);
  ds.X.resize(static_cast<Eigen::Index>(n_x), n_s);
  ds.Y.resize(static_cast<Eigen::Index>(n_x), n_s);
  r.reset_checksum();
  for (Eigen::Index i = 0; i < ds.X.rows(); ++i)
    for (Eigen::Index j = 0; j < ds.X.cols(); ++j) ds.X(i, j) = r.f64();
  for (Eigen::Index i = 0; i < ds.Y.rows(); ++i)
    for (Eigen::Index j = 0; j < ds.Y.cols(); ++j) ds.Y(i, j) = r.f64();
  const uint64_t expect = r.checksum();
  const uint64_t stored = r.u64();
  if (stored != expect)
    throw FormatError(path + ": checksum mismatch (stored " +
                      std::to_string(stored) + ", computed " +
                      std::to_string(expect) + ")");
  return ds;
}

/// One row per frame, columns s0..s{N_S-1}.
inline void export_frames_csv(const Eigen::MatrixXd& frames,
                              const std::string& path) {
  BinWriter w(path);
  std::string header;
  for (Eigen::Index j = 0; j < frames.cols(); ++j) {
    header += (j ? ",s" : "s") + std::to_string(j);
  }
  header += "\n";
  w.bytes(header.data(), header.size());
  char buf[40];
  for (Eigen::Index i = 0; i < frames.rows(); ++i) {
    std::string line;
    for (Eigen::Index j = 0; j < frames.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", frames(i, j));
      if (j) line += ',';
      line += buf;
    }
    line += '\n';
    w.bytes(line.data(), line.size());
  }
  w.commit();
}

}  // namespace uwchan
