// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/binio.hpp"
#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/metrics.hpp"
#include "uwchan/models/model.hpp"

namespace uwchan {

struct EvalReport {
  std::string model;
  std::string scenario;
  Eigen::Index n = 0;  // scored frames
  double mape_percent = 0.0;
  double mse = 0.0;
  double epsilon = 0.0;
  uint64_t seed = 0;
  std::string timestamp;  // filled by the caller when written; evaluation
                          // itself is a pure function of (model, data)
};

/// Score a model on a raw test split. Predictions are denormalized before
/// scoring so MAPE is comparable across normalization settings.
inline EvalReport evaluate(const TrainedModel& model, const Dataset& test_raw) {
  if (test_raw.frame_len() != model.n_s)
    throw std::invalid_argument("evaluate: frame length mismatch");
  const Eigen::MatrixXd pred = predict_frames(model, test_raw.X);
  const Eigen::Index offset = prediction_offset(model);
  const Eigen::MatrixXd actual =
      test_raw.Y.bottomRows(test_raw.Y.rows() - offset);

  EvalReport r;
  r.model = kind_name(model.spec.kind);
  r.scenario = test_raw.meta.scenario.empty() ? model.scenario
                                              : test_raw.meta.scenario;
  r.n = actual.rows();
  r.epsilon = default_mape_epsilon(actual);
  r.mape_percent = mape(actual, pred, r.epsilon);
  r.mse = mse(actual, pred);
  r.seed = model.spec.train.seed;
  return r;
}

inline std::string report_csv_header() {
  return "model,scenario,n,mape_percent,mse,epsilon,seed";
}

inline std::string report_csv_row(const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%s,%lld,%.17g,%.17g,%.17g,%llu",
                r.model.c_str(), r.scenario.c_str(),
                static_cast<long long>(r.n), r.mape_percent, r.mse, r.epsilon,
                static_cast<unsigned long long>(r.seed));
  return buf;
}

inline void write_report_csv(const std::vector<EvalReport>& reports,
                             const std::string& path) {
  std::string body = report_csv_header() + "\n";
  for (const EvalReport& r : reports) body += report_csv_row(r) + "\n";
  BinWriter w(path);
  w.bytes(body.data(), body.size());
  w.commit();
}

inline std::vector<EvalReport> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path);
  std::string line;
  if (!std::getline(in, line) || line != report_csv_header())
    throw FormatError(path + ": bad report header");
  std::vector<EvalReport> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    EvalReport r;
    std::string field;
    std::getline(ss, r.model, ',');
    std::getline(ss, r.scenario, ',');
    std::getline(ss, field, ',');
    r.n = std::stoll(field);
    std::getline(ss, field, ',');
    r.mape_percent = std::stod(field);
    std::getline(ss, field, ',');
    r.mse = std::stod(field);
    std::getline(ss, field, ',');
    r.epsilon = std::stod(field);
    std::getline(ss, field, ',');
    r.seed = std::stoull(field);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace uwchan
