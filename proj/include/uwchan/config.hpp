// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "uwchan/channel.hpp"
#include "uwchan/dataset.hpp"
#include "uwchan/errors.hpp"
#include "uwchan/models/model.hpp"
#include "uwchan/signal_chain.hpp"

namespace uwchan {

/// Line-oriented plain-text config: one `dotted.key = value` per line,
/// '#' starts a comment.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    KeyValueConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError(path + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty())
        throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
      cfg.values_[key] = value;
    }
    return cfg;
  }

  void set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected number, got '" +
                        it->second + "'");
    }
  }

  long long get_int(const std::string& key, long long dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    try {
      std::size_t pos = 0;
      const long long v = std::stoll(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': expected integer, got '" +
                        it->second + "'");
    }
  }

  bool get_bool(const std::string& key, bool dflt) const {
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false");
  }

  std::vector<std::string> get_list(const std::string& key,
                                    const std::string& dflt) const {
    const std::string raw = get_string(key, dflt);
    std::vector<std::string> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> values_;
};

/// Everything one end-to-end run needs: data generation settings, the split,
/// and the per-model hyperparameters.
struct RunConfig {
  std::string scenario = "tank-clean";
  int n_frames = 2000;
  int n_s = kDefaultFrameLen;
  uint64_t seed = 1;

  double sample_rate = kDefaultSampleRate;
  double carrier = kDefaultCarrierHz;
  double symbol_rate = kDefaultSymbolRate;
  double beta = 0.25;
  int span = 8;
  // Sounding probe length; the signal repeats after this many symbols so the
  // receiver sees each frame content many times (0 = non-repeating message).
  int message_period_symbols = 289;

  SplitSpec split;
  std::vector<ModelSpec> models;
  std::string out_dir = "run";
  int threads = 1;
};

inline ModelSpec model_spec_from_config(const KeyValueConfig& kv,
                                        const std::string& name,
                                        uint64_t run_seed) {
  ModelSpec spec;
  spec.kind = kind_from_name(name);
  const std::string pre = "model." + name + ".";
  spec.ridge = kv.get_double(pre + "ridge", 0.0);
  spec.k = static_cast<int>(kv.get_int(pre + "k", 0));
  spec.forest.n_trees = static_cast<int>(kv.get_int(pre + "trees", 50));
  spec.forest.max_depth = static_cast<int>(kv.get_int(pre + "max_depth", 12));
  spec.forest.min_leaf = static_cast<int>(kv.get_int(pre + "min_leaf", 5));
  spec.forest.feature_fraction =
      kv.get_double(pre + "feature_fraction", 1.0 / 3.0);
  spec.forest.bootstrap = kv.get_bool(pre + "bootstrap", true);
  spec.hidden = static_cast<int>(kv.get_int(pre + "hidden", 0));
  spec.window = static_cast<int>(kv.get_int(pre + "window", 4));
  spec.train.lr = kv.get_double(pre + "lr", 0.001);
  spec.train.batch = static_cast<int>(kv.get_int(pre + "batch", 64));
  spec.train.epochs = static_cast<int>(kv.get_int(pre + "epochs", 100));
  spec.train.seed = mix_seed(run_seed, std::hash<std::string>{}(name));
  return spec;
}

inline RunConfig run_config_from_kv(const KeyValueConfig& kv) {
  RunConfig rc;
  rc.scenario = kv.get_string("run.scenario", rc.scenario);
  rc.n_frames = static_cast<int>(kv.get_int("run.frames", rc.n_frames));
  rc.n_s = static_cast<int>(kv.get_int("run.ns", rc.n_s));
  rc.seed = static_cast<uint64_t>(kv.get_int("run.seed", static_cast<long long>(rc.seed)));
  rc.out_dir = kv.get_string("run.out", rc.out_dir);
  rc.threads = static_cast<int>(kv.get_int("run.threads", rc.threads));

  rc.sample_rate = kv.get_double("signal.sample_rate", rc.sample_rate);
  rc.carrier = kv.get_double("signal.carrier", rc.carrier);
  rc.symbol_rate = kv.get_double("signal.symbol_rate", rc.symbol_rate);
  rc.beta = kv.get_double("signal.beta", rc.beta);
  rc.span = static_cast<int>(kv.get_int("signal.span", rc.span));
  rc.message_period_symbols = static_cast<int>(
      kv.get_int("message.period_symbols", rc.message_period_symbols));

  rc.split.train_frac = kv.get_double("split.train", 0.8);
  rc.split.val_frac = kv.get_double("split.val", 0.1);
  rc.split.test_frac = kv.get_double("split.test", 0.1);
  rc.split.seed = rc.seed;

  for (const std::string& name :
       kv.get_list("models.list", "linreg,knn,rf,mlp,dnn4,lstm2"))
    rc.models.push_back(model_spec_from_config(kv, name, rc.seed));

  if (rc.n_frames < 1) throw ConfigError("run.frames must be >= 1");
  if (rc.n_s < 1) throw ConfigError("run.ns must be >= 1");
  return rc;
}

/// Channel with optional `channel.*` overrides on top of the scenario preset
/// (custom tap geometry is expressed as comma lists of delays and gains).
inline ChannelConfig channel_from_config(const KeyValueConfig& kv,
                                         const std::string& scenario,
                                         uint64_t seed) {
  ChannelConfig cfg = preset_by_name(scenario, seed);
  if (kv.has("channel.delays") != kv.has("channel.gains"))
    throw ConfigError("channel.delays and channel.gains must be given together");
  if (kv.has("channel.delays")) {
    const auto delays = kv.get_list("channel.delays", "");
    const auto gains = kv.get_list("channel.gains", "");
    if (delays.size() != gains.size() || delays.empty())
      throw ConfigError("channel.delays/gains: need equal, nonzero counts");
    cfg.paths.clear();
    for (std::size_t i = 0; i < delays.size(); ++i)
      cfg.paths.push_back({std::stoi(delays[i]), std::stod(gains[i])});
  }
  cfg.noise_snr_db = kv.get_double("channel.snr_db", cfg.noise_snr_db);
  cfg.noise_enabled = kv.get_bool("channel.noise", cfg.noise_enabled);
  cfg.tap_wander_std = kv.get_double("channel.wander", cfg.tap_wander_std);
  cfg.doppler_rate = kv.get_double("channel.doppler", cfg.doppler_rate);
  cfg.absorption_distance_km =
      kv.get_double("channel.distance_km", cfg.absorption_distance_km);
  return cfg;
}

}  // namespace uwchan
