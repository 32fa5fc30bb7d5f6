// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "uwchan/channel.hpp"
#include "uwchan/config.hpp"
#include "uwchan/dataset.hpp"
#include "uwchan/eval.hpp"
#include "uwchan/models/checkpoint.hpp"
#include "uwchan/models/model.hpp"
#include "uwchan/plot.hpp"
#include "uwchan/signal_chain.hpp"

namespace uwchan {

/// Run the transmit chain and the synthetic channel, then pair transmit and
/// receive frames row-for-row (the delay-0 direct path keeps them aligned).
inline Dataset generate_dataset(const RunConfig& rc,
                                const KeyValueConfig& kv = {}) {
  const std::size_t n_samples = static_cast<std::size_t>(rc.n_frames) *
                                static_cast<std::size_t>(rc.n_s);
  const double sps_d = rc.sample_rate / rc.symbol_rate;
  const int sps = static_cast<int>(std::lround(sps_d));
  if (std::abs(sps_d - sps) > 1e-9 || sps < 2)
    throw ConfigError("sample_rate must be an integer multiple (>= 2) of "
                      "symbol_rate");

  const std::size_t n_sym =
      (n_samples + static_cast<std::size_t>(sps) - 1) /
      static_cast<std::size_t>(sps);
  const BitStream bits = generate_bits_periodic(
      2 * n_sym, mix_seed(rc.seed, 0x62697473),  // 'bits'
      2 * static_cast<std::size_t>(rc.message_period_symbols));
  const SymbolStream symbols = qpsk_modulate(bits);
  const FilterTaps taps = raised_cosine_taps(rc.beta, rc.span, sps);
  const std::vector<cplx> baseband = pulse_shape(symbols, taps);
  PassbandSignal tx = upconvert(baseband, rc.carrier, rc.sample_rate);
  tx.samples.resize(n_samples);

  const ChannelConfig chan_cfg =
      channel_from_config(kv, rc.scenario, mix_seed(rc.seed, 0x6368616e));
  const ChannelRealization chan =
      make_channel(chan_cfg, static_cast<std::int64_t>(n_samples),
                   rc.sample_rate, rc.carrier);
  const PassbandSignal rx = propagate(tx, chan);

  DatasetMeta meta;
  meta.scenario = chan_cfg.scenario;
  meta.seed = rc.seed;
  meta.message_period_symbols = rc.message_period_symbols;
  return build_dataset(frame_signal(tx, rc.n_s), frame_signal(rx, rc.n_s),
                       meta);
}

/// Human-readable sidecar recording everything needed to regenerate a
/// dataset file.
inline void write_sidecar_meta(const RunConfig& rc, const Dataset& ds,
                               const std::string& dataset_path) {
  std::string body;
  body += "dataset = " + dataset_path + "\n";
  body += "scenario = " + ds.meta.scenario + "\n";
  body += "preset_version = " + ds.meta.preset_version + "\n";
  body += "seed = " + std::to_string(rc.seed) + "\n";
  body += "frames = " + std::to_string(ds.rows()) + "\n";
  body += "ns = " + std::to_string(ds.frame_len()) + "\n";
  body += "sample_rate = " + std::to_string(rc.sample_rate) + "\n";
  body += "carrier = " + std::to_string(rc.carrier) + "\n";
  body += "symbol_rate = " + std::to_string(rc.symbol_rate) + "\n";
  body += "beta = " + std::to_string(rc.beta) + "\n";
  body += "span = " + std::to_string(rc.span) + "\n";
  body += "message.period_symbols = " +
          std::to_string(rc.message_period_symbols) + "\n";
  BinWriter w(dataset_path + ".meta.txt");
  w.bytes(body.data(), body.size());
  w.commit();
}

/// Train one model from a raw dataset using the run's split settings.
inline TrainedModel train_on_dataset(const ModelSpec& spec, const Dataset& ds,
                                     const SplitSpec& split_spec,
                                     bool verbose = false) {
  const auto parts = split(ds, split_spec);
  TrainedModel model = fit_model(spec, parts[0], parts[1], split_spec);
  if (verbose) {
    for (std::size_t e = 0; e < model.curve.train_loss.size(); ++e)
      std::cout << "epoch " << e + 1 << " train_loss "
                << model.curve.train_loss[e] << " val_loss "
                << model.curve.val_loss[e] << "\n";
  }
  return model;
}

/// Evaluate a trained model on the test split of a raw dataset, re-deriving
/// the split from the spec stored in the checkpoint.
inline EvalReport evaluate_on_dataset(const TrainedModel& model,
                                      const Dataset& ds) {
  if (ds.frame_len() != model.n_s)
    throw std::invalid_argument("evaluate_on_dataset: N_S mismatch");
  const auto parts = split(ds, model.split_spec);
  return evaluate(model, parts[2]);
}

struct PipelineResult {
  std::string dir;
  std::vector<EvalReport> reports;
};

namespace detail {

inline std::string two(int v) {
  char b[8];
  std::snprintf(b, sizeof b, "%02d", v);
  return b;
}

}  // namespace detail

/// generate -> split -> train every configured model -> evaluate -> plots,
/// all under one directory with a checksum manifest.
inline PipelineResult run_pipeline(const RunConfig& rc,
                                   const KeyValueConfig& kv = {},
                                   bool verbose = false) {
  namespace fs = std::filesystem;
  const fs::path dir(rc.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create run directory: " + dir.string());

  std::vector<std::string> artifacts;
  const Dataset ds = generate_dataset(rc, kv);
  const std::string ds_path = (dir / "dataset.uwac").string();
  save(ds, ds_path);
  write_sidecar_meta(rc, ds, ds_path);
  artifacts.push_back("dataset.uwac");
  artifacts.push_back("dataset.uwac.meta.txt");

  PipelineResult result;
  result.dir = dir.string();
  const auto parts = split(ds, rc.split);
  for (const ModelSpec& spec : rc.models) {
    const std::string name = kind_name(spec.kind);
    if (verbose) std::cout << "training " << name << "...\n";
    TrainedModel model = fit_model(spec, parts[0], parts[1], rc.split);
    const std::string ckpt = name + ".uwam";
    save_model(model, (dir / ckpt).string());
    artifacts.push_back(ckpt);
    if (!model.curve.train_loss.empty()) {
      export_loss_curve(model.curve, (dir / (name + "_loss")).string());
      artifacts.push_back(name + "_loss.csv");
      artifacts.push_back(name + "_loss.svg");
    }
    EvalReport report = evaluate(model, parts[2]);
    result.reports.push_back(report);

    // Triptych for the first scoreable test frame.
    const Eigen::MatrixXd pred = predict_frames(model, parts[2].X);
    const Eigen::Index offset = prediction_offset(model);
    export_triptych(parts[2].X.row(offset).transpose(),
                    parts[2].Y.row(offset).transpose(),
                    pred.row(0).transpose(),
                    (dir / (name + "_triptych")).string());
    artifacts.push_back(name + "_triptych.csv");
    artifacts.push_back(name + "_triptych.svg");
    if (verbose)
      std::cout << name << ": MAPE " << report.mape_percent << "% MSE "
                << report.mse << "\n";
  }

  write_report_csv(result.reports, (dir / "report.csv").string());
  artifacts.push_back("report.csv");

  std::string manifest;
  for (const std::string& a : artifacts) {
    char line[512];
    std::snprintf(line, sizeof line, "%016llx  %s\n",
                  static_cast<unsigned long long>(
                      file_checksum((dir / a).string())),
                  a.c_str());
    manifest += line;
  }
  BinWriter w((dir / "manifest.txt").string());
  w.bytes(manifest.data(), manifest.size());
  w.commit();
  return result;
}

}  // namespace uwchan
