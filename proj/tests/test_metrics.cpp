// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "uwchan/metrics.hpp"
#include "uwchan/rng.hpp"

using namespace uwchan;

namespace {

Eigen::MatrixXd row(std::initializer_list<double> vals) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(vals.size()));
  Eigen::Index j = 0;
  for (double v : vals) m(0, j++) = v;
  return m;
}

}  // namespace

TEST_CASE("mape unit cases", "[metrics]") {
  CHECK(mape(row({1, 2, 4}), row({1, 2, 4}), 0.0) == 0.0);
  CHECK(mape(row({2, 4}), row({1, 5}), 0.0) ==
        Catch::Approx(37.5).margin(1e-9));
  CHECK(mape(row({1, 1, 1}), row({2, 0, 1}), 0.0) ==
        Catch::Approx(100.0 * 2.0 / 3.0).margin(1e-9));

  CHECK_THROWS_AS(mape(row({1, 2}), row({1, 2, 3}), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mape(row({0.0, 1.0}), row({1, 1}), 0.0), NumericError);
  CHECK_NOTHROW(mape(row({0.0, 1.0}), row({1, 1}), 1e-3));
}

TEST_CASE("mape scale invariance and non-negativity", "[metrics]") {
  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::MatrixXd a(2, 5), f(2, 5);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      // keep |a| away from zero so eps = 0 is legal
      double v = rng.normal();
      if (std::abs(v) < 1e-3) v = 1e-3;
      a(i) = v;
      f(i) = rng.normal();
    }
    const double base = mape(a, f, 0.0);
    REQUIRE(base >= 0.0);
    const double c = rng.uniform(0.5, 3.0) * (trial % 2 ? -1.0 : 1.0);
    const double scaled = mape(c * a, c * f, 0.0);
    REQUIRE(std::abs(scaled - base) <= 1e-10 * std::max(1.0, base));
    // zero iff equal
    REQUIRE(mape(a, a, 0.0) == 0.0);
  }
}

TEST_CASE("default epsilon is 1e-3 of the RMS", "[metrics]") {
  const Eigen::MatrixXd a = row({3, 4});  // RMS = sqrt(12.5)
  CHECK(default_mape_epsilon(a) ==
        Catch::Approx(1e-3 * std::sqrt(12.5)).epsilon(1e-12));
}

TEST_CASE("mse basics and independent accumulation oracle", "[metrics]") {
  CHECK(mse(row({1, 2}), row({1, 2})) == 0.0);
  CHECK(mse(row({0, 0}), row({1, 1})) == 1.0);
  CHECK_THROWS_AS(mse(row({1}), row({1, 2})), std::invalid_argument);

  Rng rng(77);
  Eigen::MatrixXd a(31, 17), f(31, 17);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = rng.normal();
    f(i) = rng.normal();
  }
  // two-pass oracle with a different accumulation order (column-major,
  // pairwise over columns)
  long double acc = 0.0L;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    long double col = 0.0L;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const long double d = a(i, j) - f(i, j);
      col += d * d;
    }
    acc += col;
  }
  const double oracle = static_cast<double>(acc / a.size());
  CHECK(mse(a, f) == Catch::Approx(oracle).epsilon(1e-12));
}
