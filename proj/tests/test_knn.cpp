// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "uwchan/models/knn.hpp"
#include "uwchan/rng.hpp"

using namespace uwchan;

namespace {

Dataset make_data(Eigen::Index rows, Eigen::Index cols, uint64_t seed) {
  Dataset ds;
  ds.X.resize(rows, cols);
  ds.Y.resize(rows, cols);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      ds.X(i, j) = rng.normal();
      ds.Y(i, j) = rng.normal();
    }
  return ds;
}

}  // namespace

TEST_CASE("knn k=1 returns the exact label of a training row", "[knn]") {
  const Dataset ds = make_data(12, 5, 1);
  const NeighborStore store = knn_fit(ds, 1);
  const Eigen::MatrixXd pred = knn_predict(store, ds.X);
  REQUIRE(pred == ds.Y);
}

TEST_CASE("knn k=N predicts the global mean label", "[knn]") {
  const Dataset ds = make_data(9, 4, 2);
  const NeighborStore store = knn_fit(ds, 9);
  const Eigen::MatrixXd pred = knn_predict(store, make_data(3, 4, 3).X);
  const Eigen::RowVectorXd mean = ds.Y.colwise().sum() / 9.0;
  for (Eigen::Index q = 0; q < pred.rows(); ++q)
    REQUIRE((pred.row(q) - mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("knn k=3 matches an exhaustive distance sort", "[knn]") {
  const Dataset ds = make_data(10, 6, 4);
  const Dataset queries = make_data(8, 6, 5);
  const NeighborStore store = knn_fit(ds, 3);
  const Eigen::MatrixXd pred = knn_predict(store, queries.X);

  for (Eigen::Index q = 0; q < queries.X.rows(); ++q) {
    std::vector<std::pair<double, int>> d;
    for (Eigen::Index i = 0; i < ds.X.rows(); ++i)
      d.push_back({(ds.X.row(i) - queries.X.row(q)).squaredNorm(),
                   static_cast<int>(i)});
    std::sort(d.begin(), d.end());
    Eigen::RowVectorXd expect = Eigen::RowVectorXd::Zero(6);
    for (int j = 0; j < 3; ++j) expect += ds.Y.row(d[j].second);
    expect /= 3.0;
    REQUIRE((pred.row(q) - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("knn distance ties break toward the lower training index", "[knn]") {
  Dataset ds = make_data(4, 3, 6);
  ds.X.row(2) = ds.X.row(0);  // duplicate input with a different label
  const NeighborStore store = knn_fit(ds, 1);
  const Eigen::MatrixXd pred = knn_predict(store, ds.X.row(0));
  REQUIRE(pred.row(0) == ds.Y.row(0));
}

TEST_CASE("knn predictions stay within the label envelope", "[knn]") {
  const Dataset ds = make_data(40, 7, 7);
  for (int k : {1, 3, 5, 9}) {
    const NeighborStore store = knn_fit(ds, k);
    const Eigen::MatrixXd pred = knn_predict(store, make_data(25, 7, 8).X);
    for (Eigen::Index j = 0; j < 7; ++j) {
      const double lo = ds.Y.col(j).minCoeff();
      const double hi = ds.Y.col(j).maxCoeff();
      REQUIRE(pred.col(j).minCoeff() >= lo - 1e-12);
      REQUIRE(pred.col(j).maxCoeff() <= hi + 1e-12);
    }
  }
}

TEST_CASE("knn argument validation and k selection", "[knn]") {
  const Dataset ds = make_data(10, 3, 9);
  CHECK_THROWS_AS(knn_fit(ds, 0), std::invalid_argument);
  CHECK_THROWS_AS(knn_fit(ds, 11), std::invalid_argument);
  Dataset empty;
  empty.X.resize(0, 3);
  empty.Y.resize(0, 3);
  CHECK_THROWS_AS(knn_fit(empty, 1), std::invalid_argument);

  // selection picks the candidate with the lowest validation error; with
  // val = train, k = 1 is a perfect memorizer
  const int k = knn_select_k(ds, ds, {1, 3, 5, 9}, 1e-3);
  CHECK(k == 1);
}
