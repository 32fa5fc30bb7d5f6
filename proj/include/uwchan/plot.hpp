// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/binio.hpp"
#include "uwchan/errors.hpp"

namespace uwchan {

struct LossCurve {
  std::vector<double> train_loss;
  std::vector<double> val_loss;  // same length as train_loss
};

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// One trace scaled into a pixel box as an SVG polyline.
inline std::string svg_polyline(const std::vector<double>& ys, double x0,
                                double y0, double w, double h,
                                const std::string& color) {
  double lo = *std::min_element(ys.begin(), ys.end());
  double hi = *std::max_element(ys.begin(), ys.end());
  if (hi - lo < 1e-300) hi = lo + 1.0;
  std::string pts;
  const double n = static_cast<double>(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double px = x0 + w * (n > 1 ? static_cast<double>(i) / (n - 1) : 0.5);
    const double py = y0 + h - h * (ys[i] - lo) / (hi - lo);
    pts += fmt_short(px) + "," + fmt_short(py) + " ";
  }
  return "<polyline fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
}

inline std::string svg_label(double x, double y, const std::string& text) {
  return "<text x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(y) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + text +
         "</text>\n";
}

inline void write_text_file(const std::string& path, const std::string& body) {
  BinWriter w(path);
  w.bytes(body.data(), body.size());
  w.commit();
}

}  // namespace detail

/// Write <base>.csv (epoch,train_loss,val_loss) and <base>.svg.
inline void export_loss_curve(const LossCurve& curve,
                              const std::string& path_base) {
  if (curve.train_loss.empty())
    throw std::invalid_argument("export_loss_curve: empty curve");
  if (curve.train_loss.size() != curve.val_loss.size())
    throw std::invalid_argument("export_loss_curve: train/val length mismatch");

  std::string csv = "epoch,train_loss,val_loss\n";
  for (std::size_t e = 0; e < curve.train_loss.size(); ++e)
    csv += std::to_string(e + 1) + "," + detail::fmt_g(curve.train_loss[e]) +
           "," + detail::fmt_g(curve.val_loss[e]) + "\n";
  detail::write_text_file(path_base + ".csv", csv);

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"360\" viewBox=\"0 0 640 360\">\n"
      "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n"
      "<rect x=\"50\" y=\"20\" width=\"560\" height=\"300\" fill=\"none\" "
      "stroke=\"black\"/>\n";
  svg += detail::svg_polyline(curve.train_loss, 50, 20, 560, 300, "#1f77b4");
  svg += detail::svg_polyline(curve.val_loss, 50, 20, 560, 300, "#d62728");
  svg += detail::svg_label(55, 16, "loss per epoch (blue: train, red: val)");
  svg += "</svg>\n";
  detail::write_text_file(path_base + ".svg", svg);
}

/// Transmitted / ground-truth / predicted frame as three stacked traces.
/// Writes <base>.csv (idx,tx,rx,pred) and <base>.svg with three polylines.
inline void export_triptych(const Eigen::VectorXd& tx,
                            const Eigen::VectorXd& rx,
                            const Eigen::VectorXd& pred,
                            const std::string& path_base) {
  if (tx.size() == 0 || rx.size() == 0 || pred.size() == 0)
    throw std::invalid_argument("export_triptych: empty trace");
  if (tx.size() != rx.size() || rx.size() != pred.size())
    throw std::invalid_argument("export_triptych: length mismatch");

  std::string csv = "idx,tx,rx,pred\n";
  for (Eigen::Index i = 0; i < tx.size(); ++i)
    csv += std::to_string(i) + "," + detail::fmt_g(tx[i]) + "," +
           detail::fmt_g(rx[i]) + "," + detail::fmt_g(pred[i]) + "\n";
  detail::write_text_file(path_base + ".csv", csv);

  auto to_vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"600\" viewBox=\"0 0 640 600\">\n"
      "<rect width=\"640\" height=\"600\" fill=\"white\"/>\n";
  const char* colors[3] = {"#1f77b4", "#2ca02c", "#d62728"};
  const char* names[3] = {"transmitted", "received (ground truth)",
                          "predicted"};
  const std::vector<double> traces[3] = {to_vec(tx), to_vec(rx), to_vec(pred)};
  for (int p = 0; p < 3; ++p) {
    const double y0 = 30.0 + 190.0 * p;
    svg += detail::svg_label(50, y0 - 6, names[p]);
    svg += "<rect x=\"50\" y=\"" + detail::fmt_short(y0) +
           "\" width=\"560\" height=\"160\" fill=\"none\" stroke=\"#999\"/>\n";
    svg += detail::svg_polyline(traces[p], 50, y0, 560, 160, colors[p]);
  }
  svg += "</svg>\n";
  detail::write_text_file(path_base + ".svg", svg);
}

}  // namespace uwchan
