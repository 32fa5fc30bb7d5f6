// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "uwchan/signal_chain.hpp"

using namespace uwchan;

TEST_CASE("generate_bits is deterministic and fair", "[signal]") {
  const BitStream a = generate_bits(4, 42);
  const BitStream b = generate_bits(4, 42);
  REQUIRE(a.bits == b.bits);

  CHECK_THROWS_AS(generate_bits(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_bits(0, 1), std::invalid_argument);

  const BitStream big = generate_bits(100000, 7);
  std::size_t ones = 0;
  for (uint8_t bit : big.bits) ones += bit;
  const double frac = static_cast<double>(ones) / big.bits.size();
  CHECK(frac >= 0.45);
  CHECK(frac <= 0.55);
}

TEST_CASE("generate_bits_periodic tiles a base pattern", "[signal]") {
  const BitStream s = generate_bits_periodic(20, 3, 6);
  for (std::size_t i = 6; i < s.bits.size(); ++i)
    REQUIRE(s.bits[i] == s.bits[i % 6]);
  // period 0 falls back to the plain generator
  const BitStream plain = generate_bits_periodic(100, 3, 0);
  REQUIRE(plain.bits == generate_bits(100, 3).bits);
}

TEST_CASE("qpsk constellation follows the fixed Gray map", "[signal]") {
  const double s = 1.0 / std::sqrt(2.0);
  BitStream b;
  b.bits = {0, 0};
  auto sym = qpsk_modulate(b).symbols;
  REQUIRE(sym.size() == 1);
  CHECK(sym[0].real() == Catch::Approx(s).margin(1e-12));
  CHECK(sym[0].imag() == Catch::Approx(s).margin(1e-12));

  b.bits = {1, 1};
  sym = qpsk_modulate(b).symbols;
  CHECK(sym[0].real() == Catch::Approx(-s).margin(1e-12));
  CHECK(sym[0].imag() == Catch::Approx(-s).margin(1e-12));

  b.bits = {0, 1};
  sym = qpsk_modulate(b).symbols;
  CHECK(sym[0].real() == Catch::Approx(-s).margin(1e-12));
  CHECK(sym[0].imag() == Catch::Approx(s).margin(1e-12));

  b.bits = {1, 0};
  sym = qpsk_modulate(b).symbols;
  CHECK(sym[0].real() == Catch::Approx(s).margin(1e-12));
  CHECK(sym[0].imag() == Catch::Approx(-s).margin(1e-12));

  b.bits = {0, 1, 1};
  CHECK_THROWS_AS(qpsk_modulate(b), std::invalid_argument);

  // all symbols unit magnitude
  const SymbolStream many = qpsk_modulate(generate_bits(1000, 5));
  for (const cplx& c : many.symbols)
    REQUIRE(std::abs(std::abs(c) - 1.0) < 1e-12);
}

TEST_CASE("qpsk round trip is lossless", "[signal]") {
  const BitStream b = generate_bits(10000, 11);
  const BitStream back = qpsk_demodulate(qpsk_modulate(b));
  REQUIRE(back.bits == b.bits);
}

TEST_CASE("qpsk_demodulate decides by nearest constellation point",
          "[signal]") {
  SymbolStream s;
  const double a = 1.0 / std::sqrt(2.0);
  s.symbols = {cplx(a, a)};
  CHECK(qpsk_demodulate(s).bits == std::vector<uint8_t>{0, 0});

  // quadrant (-, +): nearest point (-1+j)/sqrt2 which encodes bits [0,1]
  s.symbols = {cplx(-0.9, 0.1)};
  CHECK(qpsk_demodulate(s).bits == std::vector<uint8_t>{0, 1});
  s.symbols = {cplx(-0.9, -0.1)};
  CHECK(qpsk_demodulate(s).bits == std::vector<uint8_t>{1, 1});

  // noisy symbols with deviation < 0.1 decode to the original bits; the
  // brute-force nearest point over all four is the transmitted one
  const BitStream b = generate_bits(2000, 17);
  SymbolStream noisy = qpsk_modulate(b);
  Rng rng(99);
  for (cplx& c : noisy.symbols)
    c += cplx(0.09 * (rng.uniform01() - 0.5), 0.09 * (rng.uniform01() - 0.5));
  for (std::size_t i = 0; i < noisy.symbols.size(); ++i) {
    const cplx q = noisy.symbols[i];
    int best = 0;
    double best_d = 1e9;
    const cplx pts[4] = {cplx(a, a), cplx(-a, a), cplx(-a, -a), cplx(a, -a)};
    const uint8_t bits_of[4][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    for (int p = 0; p < 4; ++p)
      if (std::norm(q - pts[p]) < best_d) {
        best_d = std::norm(q - pts[p]);
        best = p;
      }
    SymbolStream one;
    one.symbols = {q};
    const BitStream dec = qpsk_demodulate(one);
    REQUIRE(dec.bits[0] == bits_of[best][0]);
    REQUIRE(dec.bits[1] == bits_of[best][1]);
  }
  REQUIRE(qpsk_demodulate(noisy).bits == b.bits);
}

TEST_CASE("raised cosine taps: peak, symmetry, Nyquist zeros", "[signal]") {
  for (double beta : {0.0, 0.25, 0.5, 1.0}) {
    const FilterTaps ft = raised_cosine_taps(beta, 8, 4);
    REQUIRE(ft.taps.size() == 8 * 4 + 1);
    const int center = 8 * 4 / 2;
    CHECK(ft.taps[center] == 1.0);  // unit peak at t = 0
    for (std::size_t i = 0; i < ft.taps.size(); ++i)
      CHECK(std::abs(ft.taps[i] - ft.taps[ft.taps.size() - 1 - i]) < 1e-12);
    for (int k = 1; k <= 4; ++k) {
      CHECK(std::abs(ft.taps[center + k * 4]) < 1e-12);
      CHECK(std::abs(ft.taps[center - k * 4]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(raised_cosine_taps(-0.1, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(raised_cosine_taps(1.1, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(raised_cosine_taps(0.25, 3, 4), std::invalid_argument);
  CHECK_THROWS_AS(raised_cosine_taps(0.25, 8, 1), std::invalid_argument);
}

TEST_CASE("raised cosine removable singularity equals the numeric limit",
          "[signal]") {
  // beta = 0.25 puts the singular point at t = 2T, an integer symbol
  // instant, so the limit must also satisfy the Nyquist zero.
  const double beta = 0.25;
  const int sps = 8;
  const FilterTaps ft = raised_cosine_taps(beta, 8, sps);
  const int center = 8 * sps / 2;
  const double at_sing = ft.taps[center + 2 * sps];

  auto h = [&](double t) {
    auto sinc = [](double x) {
      return x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
    };
    const double d = 1.0 - (2.0 * beta * t) * (2.0 * beta * t);
    return sinc(t) * std::cos(kPi * beta * t) / d;
  };
  const double approx = 0.5 * (h(2.0 + 1e-6) + h(2.0 - 1e-6));
  CHECK(std::abs(at_sing - approx) < 1e-9);

  // beta = 0.5 puts the singularity at t = T: value (pi/4) sinc(1) = 0
  const FilterTaps ft2 = raised_cosine_taps(0.5, 8, sps);
  CHECK(std::abs(ft2.taps[center + sps]) < 1e-12);
}

TEST_CASE("pulse_shape: impulse response, linearity, zero ISI", "[signal]") {
  const FilterTaps ft = raised_cosine_taps(0.25, 4, 5);

  SymbolStream one;
  one.symbols = {cplx(1.0, 0.0)};
  const std::vector<cplx> bb = pulse_shape(one, ft);
  REQUIRE(bb.size() == 1 * 5 + 4 * 5);
  for (std::size_t i = 0; i < ft.taps.size(); ++i) {
    REQUIRE(bb[i].real() == ft.taps[i]);
    REQUIRE(bb[i].imag() == 0.0);
  }
  for (std::size_t i = ft.taps.size(); i < bb.size(); ++i)
    REQUIRE(std::abs(bb[i]) == 0.0);

  SymbolStream empty;
  CHECK_THROWS_AS(pulse_shape(empty, ft), std::invalid_argument);

  // linearity: scaling input scales output
  const SymbolStream rnd = qpsk_modulate(generate_bits(64, 3));
  SymbolStream scaled = rnd;
  for (cplx& c : scaled.symbols) c *= 2.0;
  const auto out1 = pulse_shape(rnd, ft);
  const auto out2 = pulse_shape(scaled, ft);
  for (std::size_t i = 0; i < out1.size(); ++i)
    REQUIRE(std::abs(out2[i] - 2.0 * out1[i]) < 1e-12);

  // zero ISI: direct dense convolution oracle, sampled at symbol instants
  SymbolStream two;
  two.symbols = {cplx(1.0, -1.0) / std::sqrt(2.0),
                 cplx(-1.0, 1.0) / std::sqrt(2.0)};
  const auto shaped = pulse_shape(two, ft);
  // oracle: zero-stuff then full convolution
  std::vector<cplx> stuffed(2 * 5, cplx(0, 0));
  stuffed[0] = two.symbols[0];
  stuffed[5] = two.symbols[1];
  std::vector<cplx> oracle(stuffed.size() + ft.taps.size() - 1, cplx(0, 0));
  for (std::size_t i = 0; i < stuffed.size(); ++i)
    for (std::size_t j = 0; j < ft.taps.size(); ++j)
      oracle[i + j] += stuffed[i] * ft.taps[j];
  REQUIRE(oracle.size() == shaped.size());
  for (std::size_t i = 0; i < oracle.size(); ++i)
    REQUIRE(std::abs(oracle[i] - shaped[i]) < 1e-12);
  const std::size_t delay = 4 * 5 / 2;
  for (int k = 0; k < 2; ++k)
    REQUIRE(std::abs(shaped[delay + 5 * k] - two.symbols[k]) < 1e-12);
}

TEST_CASE("upconvert produces the real passband mix", "[signal]") {
  // constant baseband -> pure cosine at the carrier
  std::vector<cplx> bb(50, cplx(1.0, 0.0));
  const PassbandSignal pb = upconvert(bb, 200000.0, 1000000.0);
  for (std::size_t n = 0; n < bb.size(); ++n) {
    const double expect = std::cos(2.0 * kPi * 0.2 * static_cast<double>(n));
    REQUIRE(pb.samples[n] == Catch::Approx(expect).margin(1e-12));
  }

  std::vector<cplx> zeros(10, cplx(0.0, 0.0));
  for (double v : upconvert(zeros, 200000.0, 1000000.0).samples)
    REQUIRE(v == 0.0);

  CHECK_THROWS_AS(upconvert(bb, 500000.0, 1000000.0), std::invalid_argument);

  // passband energy is about half of baseband energy for long signals
  const SymbolStream sym = qpsk_modulate(generate_bits(4000, 9));
  const FilterTaps ft = raised_cosine_taps(0.25, 8, 10);
  const auto base = pulse_shape(sym, ft);
  const PassbandSignal pass = upconvert(base, 200000.0, 1000000.0);
  double e_base = 0.0, e_pass = 0.0;
  for (const cplx& c : base) e_base += std::norm(c);
  for (double v : pass.samples) e_pass += v * v;
  CHECK(e_pass / e_base == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("upconvert is linear", "[signal]") {
  const SymbolStream s1 = qpsk_modulate(generate_bits(40, 1));
  const SymbolStream s2 = qpsk_modulate(generate_bits(40, 2));
  const FilterTaps ft = raised_cosine_taps(0.25, 4, 6);
  const auto b1 = pulse_shape(s1, ft);
  const auto b2 = pulse_shape(s2, ft);
  std::vector<cplx> mix(b1.size());
  for (std::size_t i = 0; i < b1.size(); ++i) mix[i] = 2.0 * b1[i] - 3.0 * b2[i];
  const auto p1 = upconvert(b1, 200000.0, 1000000.0).samples;
  const auto p2 = upconvert(b2, 200000.0, 1000000.0).samples;
  const auto pm = upconvert(mix, 200000.0, 1000000.0).samples;
  for (std::size_t i = 0; i < pm.size(); ++i)
    REQUIRE(std::abs(pm[i] - (2.0 * p1[i] - 3.0 * p2[i])) < 1e-12);
}

TEST_CASE("frame_signal cuts floor(len/N_S) frames", "[signal]") {
  PassbandSignal sig;
  sig.samples.resize(578);
  for (std::size_t i = 0; i < sig.samples.size(); ++i)
    sig.samples[i] = static_cast<double>(i);
  Eigen::MatrixXd frames = frame_signal(sig, 578);
  REQUIRE(frames.rows() == 1);
  REQUIRE(frames.cols() == 578);
  REQUIRE(frames(0, 577) == 577.0);

  sig.samples.resize(579);
  frames = frame_signal(sig, 578);
  REQUIRE(frames.rows() == 1);  // 1 sample discarded

  CHECK_THROWS_AS(frame_signal(sig, 0), std::invalid_argument);

  // the paper-scale frame count: 60,000,000 samples at N_S = 578
  CHECK(60000000 / 578 == 103806);
}
