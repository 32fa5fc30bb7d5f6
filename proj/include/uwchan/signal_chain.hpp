// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uwchan/errors.hpp"
#include "uwchan/rng.hpp"

namespace uwchan {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Transmit-side defaults: 1 MHz acquisition rate, 200 kHz sonar carrier,
// 2 ksym/s transfer speed (500 samples per symbol).
inline constexpr double kDefaultSampleRate = 1'000'000.0;
inline constexpr double kDefaultCarrierHz = 200'000.0;
inline constexpr double kDefaultSymbolRate = 2'000.0;
inline constexpr int kDefaultSamplesPerSymbol = 500;
inline constexpr int kDefaultFrameLen = 578;

struct BitStream {
  std::vector<uint8_t> bits;  // values 0/1, even count
  uint64_t seed = 0;
};

struct SymbolStream {
  std::vector<cplx> symbols;  // unit-magnitude QPSK points
};

struct FilterTaps {
  std::vector<double> taps;  // span*sps + 1 coefficients, symmetric
  double rolloff = 0.25;
  int span = 8;  // symbols
  int sps = kDefaultSamplesPerSymbol;
};

struct PassbandSignal {
  std::vector<double> samples;
  double sample_rate = kDefaultSampleRate;
  double carrier = kDefaultCarrierHz;
};

/// Seeded Bernoulli(1/2) message source.
inline BitStream generate_bits(std::size_t n, uint64_t seed) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("generate_bits: n must be even and > 0");
  BitStream out;
  out.seed = seed;
  out.bits.resize(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) out.bits[i] = rng.next_bit() ? 1 : 0;
  return out;
}

/// Periodic message source: a seeded base pattern of `period` bits tiled to
/// length n. Emulates the looped sounding transmissions of a channel
/// measurement campaign; period 0 means non-repeating.
inline BitStream generate_bits_periodic(std::size_t n, uint64_t seed,
                                        std::size_t period_bits) {
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("generate_bits_periodic: n must be even, > 0");
  if (period_bits == 0 || period_bits >= n) return generate_bits(n, seed);
  if (period_bits % 2 != 0)
    throw std::invalid_argument("generate_bits_periodic: period must be even");
  BitStream base = generate_bits(period_bits, seed);
  BitStream out;
  out.seed = seed;
  out.bits.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.bits[i] = base.bits[i % period_bits];
  return out;
}

// Gray-mapped QPSK. First bit of the pair selects the Q sign, second bit the
// I sign: 00 -> (+1+j)/sqrt2, 01 -> (-1+j)/sqrt2, 11 -> (-1-j)/sqrt2,
// 10 -> (+1-j)/sqrt2.
inline SymbolStream qpsk_modulate(const BitStream& bits) {
  if (bits.bits.size() % 2 != 0)
    throw std::invalid_argument("qpsk_modulate: bit count must be even");
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  SymbolStream out;
  out.symbols.reserve(bits.bits.size() / 2);
  for (std::size_t i = 0; i + 1 < bits.bits.size(); i += 2) {
    const bool b0 = bits.bits[i] != 0;      // Q sign
    const bool b1 = bits.bits[i + 1] != 0;  // I sign
    out.symbols.emplace_back(b1 ? -inv_sqrt2 : inv_sqrt2,
                             b0 ? -inv_sqrt2 : inv_sqrt2);
  }
  return out;
}

/// Nearest-constellation-point decision; exact inverse of qpsk_modulate on
/// clean symbols. For this constellation the nearest point is decided by the
/// signs of I and Q.
inline BitStream qpsk_demodulate(const SymbolStream& symbols) {
  BitStream out;
  out.bits.reserve(symbols.symbols.size() * 2);
  for (const cplx& s : symbols.symbols) {
    out.bits.push_back(s.imag() < 0.0 ? 1 : 0);  // Q sign -> first bit
    out.bits.push_back(s.real() < 0.0 ? 1 : 0);  // I sign -> second bit
  }
  return out;
}

/// Raised-cosine impulse response sampled at sps points per symbol,
/// normalized to unit peak. h(t) = sinc(t/T) cos(pi b t/T) / (1-(2bt/T)^2),
/// with the removable singularity at |t| = T/(2b) replaced by its limit
/// (pi/4) sinc(1/(2b)).
inline FilterTaps raised_cosine_taps(double rolloff, int span, int sps) {
  if (!(rolloff >= 0.0 && rolloff <= 1.0))
    throw std::invalid_argument("raised_cosine_taps: rolloff must be in [0,1]");
  if (span < 2 || span % 2 != 0)
    throw std::invalid_argument("raised_cosine_taps: span must be even, >= 2");
  if (sps < 2) throw std::invalid_argument("raised_cosine_taps: sps >= 2");

  auto sinc = [](double x) {
    if (x == 0.0) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
  };

  FilterTaps ft;
  ft.rolloff = rolloff;
  ft.span = span;
  ft.sps = sps;
  const int n = span * sps + 1;
  const int center = span * sps / 2;
  ft.taps.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i - center) / sps;  // symbol units
    double v;
    const double d = 1.0 - (2.0 * rolloff * t) * (2.0 * rolloff * t);
    if (std::abs(d) < 1e-12) {
      v = sinc(t) * (kPi / 4.0);  // t = +-T/(2b): L'Hopital limit of the ratio
    } else {
      v = sinc(t) * std::cos(kPi * rolloff * t) / d;
    }
    ft.taps[i] = v;
  }
  return ft;
}

/// Zero-stuff to sps samples per symbol and convolve with the taps
/// (implemented as a per-symbol scatter-add, identical sums to the dense
/// convolution of the zero-stuffed sequence). Output length
/// n_sym*sps + span*sps.
inline std::vector<cplx> pulse_shape(const SymbolStream& symbols,
                                     const FilterTaps& taps) {
  if (symbols.symbols.empty())
    throw std::invalid_argument("pulse_shape: empty symbol stream");
  const std::size_t n_sym = symbols.symbols.size();
  const std::size_t n_taps = taps.taps.size();
  const std::size_t out_len =
      n_sym * static_cast<std::size_t>(taps.sps) +
      static_cast<std::size_t>(taps.span) * static_cast<std::size_t>(taps.sps);
  std::vector<cplx> out(out_len, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n_sym; ++k) {
    const cplx s = symbols.symbols[k];
    const std::size_t base = k * static_cast<std::size_t>(taps.sps);
    for (std::size_t j = 0; j < n_taps; ++j) out[base + j] += s * taps.taps[j];
  }
  return out;
}

/// Real passband mix: s[n] = I[n] cos(2 pi fc n/fs) - Q[n] sin(2 pi fc n/fs).
/// The carrier phase is computed from an exact fmod of fc*n so long signals
/// do not accumulate phase error.
inline PassbandSignal upconvert(const std::vector<cplx>& baseband,
                                double carrier, double sample_rate) {
  if (!(carrier < sample_rate / 2.0))
    throw std::invalid_argument("upconvert: carrier must be below Nyquist");
  PassbandSignal out;
  out.sample_rate = sample_rate;
  out.carrier = carrier;
  out.samples.resize(baseband.size());
  for (std::size_t n = 0; n < baseband.size(); ++n) {
    const double r = std::fmod(carrier * static_cast<double>(n), sample_rate);
    const double ang = 2.0 * kPi * r / sample_rate;
    out.samples[n] =
        baseband[n].real() * std::cos(ang) - baseband[n].imag() * std::sin(ang);
  }
  return out;
}

/// Cut the signal into contiguous non-overlapping frames of n_s samples,
/// one row per frame; the trailing remainder is discarded.
inline Eigen::MatrixXd frame_signal(const PassbandSignal& signal, int n_s) {
  if (n_s <= 0) throw std::invalid_argument("frame_signal: N_S must be >= 1");
  const std::size_t n_frames = signal.samples.size() / static_cast<std::size_t>(n_s);
  Eigen::MatrixXd frames(static_cast<Eigen::Index>(n_frames), n_s);
  for (std::size_t f = 0; f < n_frames; ++f)
    for (int j = 0; j < n_s; ++j)
      frames(static_cast<Eigen::Index>(f), j) =
          signal.samples[f * static_cast<std::size_t>(n_s) + j];
  return frames;
}

}  // namespace uwchan
