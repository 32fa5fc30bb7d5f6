// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "uwchan/channel.hpp"
#include "uwchan/dataset.hpp"
#include "uwchan/rng.hpp"

using namespace uwchan;

namespace {

Eigen::MatrixXd random_frames(Eigen::Index rows, Eigen::Index cols,
                              uint64_t seed) {
  Eigen::MatrixXd m(rows, cols);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("build_dataset pairs frames row for row", "[dataset]") {
  const Eigen::MatrixXd tx = random_frames(10, 8, 1);
  CHECK_THROWS_AS(build_dataset(tx, random_frames(9, 8, 2), {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_dataset(tx, random_frames(10, 7, 2), {}),
                  std::invalid_argument);

  // identity channel: X = Y exactly
  const Dataset ds = build_dataset(tx, tx, {});
  REQUIRE(ds.X == ds.Y);
  REQUIRE(ds.meta.n_s == 8);
}

TEST_CASE("delay-d channel shifts Y across frame boundaries", "[dataset]") {
  // Frames cut from a propagated stream must equal the input stream shifted
  // by the tap delay, including across frame boundaries.
  const int n_s = 32;
  const int n_frames = 6;
  PassbandSignal x;
  x.samples.resize(static_cast<std::size_t>(n_s * n_frames));
  Rng rng(5);
  for (double& v : x.samples) v = rng.normal();

  ChannelConfig cfg = identity_preset(1);
  const int d = 11;
  cfg.paths = {{0, 0.0}, {d, 1.0}};
  const PassbandSignal y =
      propagate(x, make_channel(cfg, static_cast<std::int64_t>(x.samples.size())));
  const Dataset ds =
      build_dataset(frame_signal(x, n_s), frame_signal(y, n_s), {});
  for (int f = 0; f < n_frames; ++f)
    for (int j = 0; j < n_s; ++j) {
      const int n = f * n_s + j;
      const double expect = n < d ? 0.0 : x.samples[static_cast<std::size_t>(n - d)];
      REQUIRE(ds.Y(f, j) == expect);
    }
}

TEST_CASE("window_dataset is a pure view with last-element labels",
          "[dataset]") {
  Dataset ds;
  ds.X = random_frames(10, 4, 3);
  ds.Y = random_frames(10, 4, 4);

  CHECK_THROWS_AS(window_dataset(ds, 0), std::invalid_argument);
  CHECK_THROWS_AS(window_dataset(ds, 11), std::invalid_argument);

  const WindowedDataset w = window_dataset(ds, 3);
  REQUIRE(w.count() == 8);
  // sample 0: rows {0,1,2}, label = Y row 2
  for (int t = 0; t < 3; ++t) REQUIRE(w.window_row(0, t) == ds.X.row(t));
  REQUIRE(w.label_row(0) == ds.Y.row(2));
  // every window element equals its source row bitwise
  for (Eigen::Index i = 0; i < w.count(); ++i)
    for (int t = 0; t < 3; ++t) REQUIRE(w.window_row(i, t) == ds.X.row(i + t));

  const WindowedDataset w1 = window_dataset(ds, 1);
  REQUIRE(w1.count() == 10);
  for (Eigen::Index i = 0; i < 10; ++i) REQUIRE(w1.label_row(i) == ds.Y.row(i));

  Dataset five;
  five.X = random_frames(5, 4, 5);
  five.Y = random_frames(5, 4, 6);
  REQUIRE(window_dataset(five, 2).count() == 4);
}

TEST_CASE("split is contiguous, exhaustive and disjoint", "[dataset]") {
  Dataset ds;
  ds.X = random_frames(10, 3, 7);
  ds.Y = random_frames(10, 3, 8);

  const auto parts = split(ds, SplitSpec{0.8, 0.1, 0.1, 0});
  REQUIRE(parts[0].rows() == 8);
  REQUIRE(parts[1].rows() == 1);
  REQUIRE(parts[2].rows() == 1);
  // union preserves original order: stack and compare
  Eigen::MatrixXd stacked(10, 3);
  stacked << parts[0].X, parts[1].X, parts[2].X;
  REQUIRE(stacked == ds.X);

  SplitSpec bad{0.9, 0.05, 0.05, 0};
  Dataset tiny;
  tiny.X = random_frames(3, 2, 1);
  tiny.Y = random_frames(3, 2, 1);
  CHECK_THROWS_AS(split(tiny, bad), std::invalid_argument);  // empty val/test
  CHECK_THROWS_AS(split(ds, SplitSpec{0.5, 0.2, 0.2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, SplitSpec{1.0, 0.0, 0.0, 0}), std::invalid_argument);

  // paper-scale arithmetic
  const double n = 100000;
  CHECK(std::floor(0.1 * n) == 10000);
}

TEST_CASE("normalization is a train-statistics affine map", "[dataset]") {
  Dataset ds;
  ds.X = random_frames(200, 6, 9).array() * 3.0 + 2.0;
  ds.Y = random_frames(200, 6, 10).array() * 0.5 - 1.0;

  const auto [norm, stats] = normalize(ds);
  CHECK(std::abs(norm.X.mean()) < 1e-9);
  const double std_x =
      std::sqrt((norm.X.array() - norm.X.mean()).square().mean());
  CHECK(std_x == Catch::Approx(1.0).margin(1e-6));

  // round trip within 1e-10
  const Eigen::MatrixXd back = denormalize_labels(norm.Y, stats);
  CHECK((back - ds.Y).cwiseAbs().maxCoeff() < 1e-10);
  const Eigen::MatrixXd back_x =
      (normalize_inputs(ds.X, stats).array() * stats.std_x + stats.mean_x);
  CHECK((back_x - ds.X).cwiseAbs().maxCoeff() < 1e-10);

  // constant dataset: mean subtracted, scale 1
  Dataset flat;
  flat.X = Eigen::MatrixXd::Constant(4, 3, 5.0);
  flat.Y = Eigen::MatrixXd::Constant(4, 3, -2.0);
  const auto [nflat, fstats] = normalize(flat);
  CHECK(fstats.std_x == 1.0);
  CHECK(fstats.std_y == 1.0);
  CHECK(nflat.X.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dataset persistence round trip is bit-exact", "[dataset]") {
  Dataset ds;
  ds.X = random_frames(17, 9, 11);
  ds.Y = random_frames(17, 9, 12);
  ds.meta.scenario = "custom";
  const std::string path = temp_path("uwchan_ds_test.uwac");
  save(ds, path);
  const Dataset back = load(path);
  REQUIRE(back.X == ds.X);
  REQUIRE(back.Y == ds.Y);
  std::filesystem::remove(path);
}

TEST_CASE("dataset loader reports malformed files", "[dataset]") {
  Dataset ds;
  ds.X = random_frames(4, 3, 13);
  ds.Y = random_frames(4, 3, 14);
  const std::string path = temp_path("uwchan_ds_bad.uwac");
  save(ds, path);

  // corrupt magic
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_WITH(load(path), Catch::Matchers::ContainsSubstring("bad magic"));

  save(ds, path);
  // truncate
  std::filesystem::resize_file(path, 40);
  CHECK_THROWS_WITH(load(path),
                    Catch::Matchers::ContainsSubstring("expected"));
  std::filesystem::remove(path);
}

TEST_CASE("frames csv export", "[dataset]") {
  const Eigen::MatrixXd m = random_frames(3, 4, 15);
  const std::string path = temp_path("uwchan_frames.csv");
  export_frames_csv(m, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  REQUIRE(header == "s0,s1,s2,s3");
  int rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 3);
  std::filesystem::remove(path);
}
