// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uwchan/plot.hpp"
#include "uwchan/rng.hpp"

using namespace uwchan;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_substr(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + 1))
    ++n;
  return n;
}

std::string temp_base(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("loss curve export writes csv and svg", "[plot]") {
  LossCurve curve;
  for (int e = 0; e < 100; ++e) {
    curve.train_loss.push_back(1.0 / (e + 1));
    curve.val_loss.push_back(1.2 / (e + 1));
  }
  const std::string base = temp_base("uwchan_loss");
  export_loss_curve(curve, base);

  const std::string csv = slurp(base + ".csv");
  REQUIRE(count_substr(csv, "\n") == 101);  // header + 100 rows
  REQUIRE(csv.rfind("epoch,train_loss,val_loss\n", 0) == 0);

  const std::string svg = slurp(base + ".svg");
  REQUIRE(count_substr(svg, "<polyline") == 2);
  REQUIRE(svg.find("</svg>") != std::string::npos);

  LossCurve empty;
  CHECK_THROWS_AS(export_loss_curve(empty, base), std::invalid_argument);
  std::filesystem::remove(base + ".csv");
  std::filesystem::remove(base + ".svg");
}

TEST_CASE("triptych export contains three traces", "[plot]") {
  Rng rng(4);
  Eigen::VectorXd tx(578), rx(578), pred(578);
  for (Eigen::Index i = 0; i < tx.size(); ++i) {
    tx[i] = rng.normal();
    rx[i] = rng.normal();
    pred[i] = rng.normal();
  }
  const std::string base = temp_base("uwchan_triptych");
  export_triptych(tx, rx, pred, base);

  const std::string svg = slurp(base + ".svg");
  REQUIRE(count_substr(svg, "<polyline") == 3);

  const std::string csv = slurp(base + ".csv");
  REQUIRE(csv.rfind("idx,tx,rx,pred\n", 0) == 0);
  REQUIRE(count_substr(csv, "\n") == 579);

  Eigen::VectorXd empty;
  CHECK_THROWS_AS(export_triptych(empty, rx, pred, base),
                  std::invalid_argument);
  CHECK_THROWS_AS(export_triptych(tx, rx, pred.head(10), base),
                  std::invalid_argument);
  std::filesystem::remove(base + ".csv");
  std::filesystem::remove(base + ".svg");
}

TEST_CASE("unwritable path raises io-error", "[plot]") {
  LossCurve curve;
  curve.train_loss = {1.0};
  curve.val_loss = {1.0};
  CHECK_THROWS_AS(export_loss_curve(curve, "/nonexistent_dir_xyz/plot"),
                  IoError);
}
