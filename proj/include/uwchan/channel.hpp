// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uwchan/errors.hpp"
#include "uwchan/rng.hpp"
#include "uwchan/signal_chain.hpp"

namespace uwchan {

struct PathTap {
  int delay = 0;      // samples
  double gain = 1.0;  // linear amplitude
};

/// Tap-delay-line channel description. Scenario presets below stand in for
/// the three measurement campaigns: a quiet test tank, a quiet lake, and the
/// same lake with an artificial disturbance.
struct ChannelConfig {
  std::string scenario = "custom";
  std::vector<PathTap> paths{{0, 1.0}};
  double absorption_distance_km = 0.0;  // propagation distance for Thorp loss
  double doppler_rate = 0.0;            // relative gain drift per second
  double noise_snr_db = 40.0;           // ambient noise level, [-10, 60]
  bool noise_enabled = true;
  double tap_wander_std = 0.0;  // gain random-walk std per sqrt-second
  uint64_t seed = 0;
};

/// Per-block effective tap gains plus the seeded noise stream parameters.
/// Bit-exactly reproducible from (config, seed).
struct ChannelRealization {
  ChannelConfig config;
  int block_len = 512;       // samples per gain block
  Eigen::MatrixXd tap_gains; // n_blocks x n_paths
  uint64_t noise_seed = 0;
  std::int64_t n_samples = 0;
  double sample_rate = kDefaultSampleRate;
};

/// Thorp seawater absorption in dB/km for f in kHz:
/// a(f) = 0.11 f^2/(1+f^2) + 44 f^2/(4100+f^2) + 2.75e-4 f^2 + 0.003.
inline double thorp_absorption(double f_khz) {
  if (!(f_khz > 0.0))
    throw std::invalid_argument("thorp_absorption: frequency must be > 0");
  const double f2 = f_khz * f_khz;
  return 0.11 * f2 / (1.0 + f2) + 44.0 * f2 / (4100.0 + f2) +
         2.75e-4 * f2 + 0.003;
}

inline void validate_channel_config(const ChannelConfig& cfg) {
  if (cfg.paths.empty())
    throw std::invalid_argument("channel config: at least one path required");
  if (cfg.paths[0].delay != 0)
    throw std::invalid_argument("channel config: path 0 must have delay 0");
  for (const PathTap& p : cfg.paths) {
    if (p.delay < 0)
      throw std::invalid_argument("channel config: negative path delay");
    if (!std::isfinite(p.gain))
      throw std::invalid_argument("channel config: non-finite path gain");
  }
  if (!(cfg.noise_snr_db >= -10.0 && cfg.noise_snr_db <= 60.0))
    throw std::invalid_argument("channel config: SNR must be in [-10, 60] dB");
  if (cfg.tap_wander_std < 0.0 || !std::isfinite(cfg.tap_wander_std))
    throw std::invalid_argument("channel config: bad tap_wander_std");
}

// Scenario presets (version 1; acceptance tests pin these numbers).

inline ChannelConfig tank_clean_preset(uint64_t seed) {
  ChannelConfig c;
  c.scenario = "tank-clean";
  c.paths = {{0, 1.0}, {7, 0.08}};  // direct path plus a weak wall bounce
  c.absorption_distance_km = 0.005;
  c.doppler_rate = 0.0;
  c.noise_snr_db = 40.0;
  c.tap_wander_std = 0.0;
  c.seed = seed;
  return c;
}

inline ChannelConfig lake_clean_preset(uint64_t seed) {
  ChannelConfig c;
  c.scenario = "lake-clean";
  c.paths = {{0, 1.0}, {17, 0.55}, {46, 0.32}, {81, 0.18}, {124, 0.10}};
  c.absorption_distance_km = 0.5;
  c.doppler_rate = 0.002;
  c.noise_snr_db = 25.0;
  c.tap_wander_std = 0.0;
  c.seed = seed;
  return c;
}

inline ChannelConfig lake_disturbed_preset(uint64_t seed) {
  ChannelConfig c = lake_clean_preset(seed);
  c.scenario = "lake-disturbed";
  c.tap_wander_std = 0.02;  // surface agitation: gains random-walk over time
  c.seed = seed;
  return c;
}

/// Distortion-free pass-through; used by alignment/interpolation tests.
inline ChannelConfig identity_preset(uint64_t seed) {
  ChannelConfig c;
  c.scenario = "identity";
  c.paths = {{0, 1.0}};
  c.absorption_distance_km = 0.0;
  c.noise_snr_db = 60.0;
  c.noise_enabled = false;
  c.seed = seed;
  return c;
}

inline ChannelConfig preset_by_name(const std::string& name, uint64_t seed) {
  if (name == "tank-clean") return tank_clean_preset(seed);
  if (name == "lake-clean") return lake_clean_preset(seed);
  if (name == "lake-disturbed") return lake_disturbed_preset(seed);
  if (name == "identity") return identity_preset(seed);
  throw ConfigError("unknown scenario '" + name +
                    "'; valid presets: tank-clean, lake-clean, "
                    "lake-disturbed, identity");
}

/// Realize a time-varying tap trajectory over n_samples. Base gains are the
/// configured amplitudes scaled by the Thorp absorption for the carrier at
/// the configured distance; on top of that each tap follows a deterministic
/// Doppler drift plus (for disturbed scenarios) a seeded Gaussian random
/// walk with per-second increment variance tap_wander_std^2.
inline ChannelRealization make_channel(const ChannelConfig& config,
                                       std::int64_t n_samples,
                                       double sample_rate = kDefaultSampleRate,
                                       double carrier_hz = kDefaultCarrierHz) {
  validate_channel_config(config);
  if (n_samples <= 0)
    throw std::invalid_argument("make_channel: n_samples must be > 0");

  ChannelRealization r;
  r.config = config;
  r.sample_rate = sample_rate;
  r.n_samples = n_samples;
  r.noise_seed = mix_seed(config.seed, 0x6e6f6973);  // 'nois'

  const int n_paths = static_cast<int>(config.paths.size());
  const std::int64_t n_blocks = (n_samples + r.block_len - 1) / r.block_len;
  r.tap_gains.resize(n_blocks, n_paths);

  const double att_db =
      thorp_absorption(carrier_hz / 1000.0) * config.absorption_distance_km;
  const double att = std::pow(10.0, -att_db / 20.0);

  Rng walk_rng(mix_seed(config.seed, 0x77616c6b));  // 'walk'
  // Disturbance also jitters the Doppler drift once per realization.
  double doppler = config.doppler_rate;
  if (config.tap_wander_std > 0.0 && doppler != 0.0)
    doppler *= 1.0 + 0.5 * walk_rng.normal();

  const double dt = static_cast<double>(r.block_len) / sample_rate;
  const double walk_step_std = config.tap_wander_std * std::sqrt(dt);
  std::vector<double> walk(n_paths, 0.0);
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const double t = static_cast<double>(b) * dt;
    for (int p = 0; p < n_paths; ++p) {
      if (walk_step_std > 0.0) walk[p] += walk_step_std * walk_rng.normal();
      r.tap_gains(b, p) =
          config.paths[p].gain * att * (1.0 + doppler * t) + walk[p];
    }
  }
  return r;
}

/// y[n] = sum_p g_p[n] x[n - d_p] + w[n]; w is white Gaussian scaled so the
/// ratio of multipath output power to noise power equals noise_snr_db.
/// Output has the same length as the input; with noise disabled the map is
/// linear in x.
inline PassbandSignal propagate(const PassbandSignal& signal,
                                const ChannelRealization& chan) {
  const std::int64_t n = static_cast<std::int64_t>(signal.samples.size());
  if (n > chan.n_samples)
    throw std::invalid_argument(
        "propagate: realization covers fewer samples than the signal");

  PassbandSignal out;
  out.sample_rate = signal.sample_rate;
  out.carrier = signal.carrier;
  out.samples.assign(signal.samples.size(), 0.0);

  const int n_paths = static_cast<int>(chan.config.paths.size());
  for (int p = 0; p < n_paths; ++p) {
    const int d = chan.config.paths[p].delay;
    for (std::int64_t i = d; i < n; ++i) {
      const std::int64_t b = i / chan.block_len;
      out.samples[i] += chan.tap_gains(b, p) * signal.samples[i - d];
    }
  }

  if (chan.config.noise_enabled) {
    double power = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
      power += out.samples[i] * out.samples[i];
    power /= static_cast<double>(n);
    const double noise_std =
        std::sqrt(power / std::pow(10.0, chan.config.noise_snr_db / 10.0));
    Rng noise_rng(chan.noise_seed);
    for (std::int64_t i = 0; i < n; ++i)
      out.samples[i] += noise_std * noise_rng.normal();
  }
  return out;
}

}  // namespace uwchan
