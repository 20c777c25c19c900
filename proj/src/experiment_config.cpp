// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ergonull Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "ergonull/experiment_config.hpp"

#include "ergonull/curve_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ergonull {

ConfigError::ConfigError(const std::string& message, std::string field, std::optional<std::size_t> line)
    : std::runtime_error(message), field_(std::move(field)), line_(line) {}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLos4User: return "los-4user";
    case ExperimentKind::kLos6User: return "los-6user";
    case ExperimentKind::kDmaxSweep: return "dmax-sweep";
    case ExperimentKind::kMimo2x3: return "mimo-2x3";
  }
  return "unknown";
}

std::string to_string(PowerConvention convention) {
  return convention == PowerConvention::kTotal ? "total" : "per";
}

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name", "experiment", "num_trials", "seed", "snr_grid_db", "sir_db", "interferer_power_convention",
      "num_users", "d_max_wl", "d_max_grid_wl", "array_pitch_wl", "phi_grid_deg", "selection_mode",
      "strict_integer_spacing", "directional_error_deg", "num_interferers", "num_rx_elements", "num_streams",
      "num_rx_chains", "desired_paths", "subset_search_cap", "mimo_stream_mode", "mimo_refine", "path_gain_model",
      "carrier_hz"};
  return keys;
}

// Line of the first occurrence of "key" in the raw text, if any.
std::optional<std::size_t> line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) return std::nullopt;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

std::string describe(const std::string& field, std::optional<std::size_t> line, const std::string& what) {
  std::ostringstream os;
  os << "config field '" << field << "'";
  if (line) os << " (line " << *line << ")";
  os << ": " << what;
  return os.str();
}

class Reader {
 public:
  Reader(const json& doc, const std::string& text) : doc_(doc), text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& what) const {
    const auto line = line_of_key(text_, field);
    throw ConfigError(describe(field, line, what), field, line);
  }

  bool has(const std::string& key) const { return doc_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out, bool required = false) const {
    if (!doc_.contains(key)) {
      if (required) throw ConfigError("config is missing required field '" + key + "'", key);
      return;
    }
    const json& v = doc_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(key, "expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(key, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        fail(key, "expected a nonnegative integer");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) fail(key, "expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) fail(key, "expected an array of numbers");
      out.clear();
      for (const json& x : v) {
        if (!x.is_number()) fail(key, "expected an array of numbers");
        out.push_back(x.get<double>());
      }
    }
  }

 private:
  const json& doc_;
  const std::string& text_;
};

ExperimentKind parse_kind(const Reader& r, const std::string& s) {
  if (s == "los-4user") return ExperimentKind::kLos4User;
  if (s == "los-6user") return ExperimentKind::kLos6User;
  if (s == "dmax-sweep") return ExperimentKind::kDmaxSweep;
  if (s == "mimo-2x3") return ExperimentKind::kMimo2x3;
  r.fail("experiment", "unknown experiment kind '" + s + "' (los-4user | los-6user | dmax-sweep | mimo-2x3)");
}

}  // namespace

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& field, const std::string& what) { throw ConfigError(describe(field, {}, what), field); };
  if (num_trials < 1) bad("num_trials", "must be >= 1");
  if (snr_grid_db.empty()) bad("snr_grid_db", "must be nonempty");
  for (double s : snr_grid_db)
    if (!std::isfinite(s)) bad("snr_grid_db", "values must be finite");
  if (!std::isfinite(sir_db)) bad("sir_db", "must be finite");
  if (!(array_pitch_wl > 0.0)) bad("array_pitch_wl", "must be positive");
  if (!(phi_grid_deg > 0.0 && phi_grid_deg <= 360.0)) bad("phi_grid_deg", "must be in (0, 360]");
  if (selection_mode != "phase-grid" && selection_mode != "closed-form")
    bad("selection_mode", "must be 'phase-grid' or 'closed-form'");
  if (!(directional_error_deg >= 0.0)) bad("directional_error_deg", "must be >= 0");
  switch (experiment) {
    case ExperimentKind::kLos4User:
    case ExperimentKind::kLos6User:
      if (num_users < 2) bad("num_users", "must be >= 2");
      if (!(d_max_wl >= array_pitch_wl)) bad("d_max_wl", "must be at least one array pitch");
      break;
    case ExperimentKind::kDmaxSweep:
      if (num_users < 2) bad("num_users", "must be >= 2");
      if (d_max_grid_wl.empty()) bad("d_max_grid_wl", "must be nonempty for dmax-sweep");
      for (double d : d_max_grid_wl)
        if (!(d >= array_pitch_wl)) bad("d_max_grid_wl", "values must be at least one array pitch");
      if (snr_grid_db.size() != 1) bad("snr_grid_db", "dmax-sweep takes exactly one SNR value");
      break;
    case ExperimentKind::kMimo2x3:
      if (num_streams < 1) bad("num_streams", "must be >= 1");
      if (num_rx_chains != num_streams + 1) bad("num_rx_chains", "must equal num_streams + 1");
      if (desired_paths < num_streams) bad("desired_paths", "must be >= num_streams");
      if (num_rx_elements < num_rx_chains) bad("num_rx_elements", "must be >= num_rx_chains");
      if (mimo_stream_mode != "strict" && mimo_stream_mode != "relaxed")
        bad("mimo_stream_mode", "must be 'strict' or 'relaxed'");
      if (path_gain_model != "unit-phase" && path_gain_model != "rayleigh")
        bad("path_gain_model", "must be 'unit-phase' or 'rayleigh'");
      if (!(carrier_hz > 0.0)) bad("carrier_hz", "must be positive");
      if (num_rx_elements > subset_search_cap)
        bad("num_rx_elements", "exceeds subset_search_cap; raise subset_search_cap to allow the exhaustive search");
      break;
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  j["experiment"] = to_string(experiment);
  j["num_trials"] = num_trials;
  j["seed"] = seed;
  j["snr_grid_db"] = snr_grid_db;
  j["sir_db"] = sir_db;
  j["interferer_power_convention"] = to_string(interferer_power_convention);
  j["num_users"] = num_users;
  j["d_max_wl"] = d_max_wl;
  j["d_max_grid_wl"] = d_max_grid_wl;
  j["array_pitch_wl"] = array_pitch_wl;
  j["phi_grid_deg"] = phi_grid_deg;
  j["selection_mode"] = selection_mode;
  j["strict_integer_spacing"] = strict_integer_spacing;
  j["directional_error_deg"] = directional_error_deg;
  j["num_interferers"] = num_interferers;
  j["num_rx_elements"] = num_rx_elements;
  j["num_streams"] = num_streams;
  j["num_rx_chains"] = num_rx_chains;
  j["desired_paths"] = desired_paths;
  j["subset_search_cap"] = subset_search_cap;
  j["mimo_stream_mode"] = mimo_stream_mode;
  j["mimo_refine"] = mimo_refine;
  j["path_gain_model"] = path_gain_model;
  j["carrier_hz"] = carrier_hz;
  return j;
}

std::uint64_t ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" inside the message.
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  const Reader r(doc, text);
  for (const auto& [key, value] : doc.items())
    if (!known_keys().contains(key)) r.fail(key, "unknown field");

  ExperimentConfig c;
  std::string kind;
  r.get("experiment", kind, true);
  c.experiment = parse_kind(r, kind);
  if (c.experiment == ExperimentKind::kLos6User) {
    c.num_users = 6;
    c.d_max_wl = 200.0;
  }
  r.get("num_trials", c.num_trials, true);
  r.get("seed", c.seed, true);
  r.get("snr_grid_db", c.snr_grid_db, true);
  c.name = to_string(c.experiment);
  r.get("name", c.name);
  r.get("sir_db", c.sir_db);
  std::string conv = to_string(c.interferer_power_convention);
  r.get("interferer_power_convention", conv);
  if (conv == "total") c.interferer_power_convention = PowerConvention::kTotal;
  else if (conv == "per") c.interferer_power_convention = PowerConvention::kPerInterferer;
  else r.fail("interferer_power_convention", "must be 'total' or 'per'");
  r.get("num_users", c.num_users);
  r.get("d_max_wl", c.d_max_wl);
  r.get("d_max_grid_wl", c.d_max_grid_wl);
  r.get("array_pitch_wl", c.array_pitch_wl);
  r.get("phi_grid_deg", c.phi_grid_deg);
  r.get("selection_mode", c.selection_mode);
  r.get("strict_integer_spacing", c.strict_integer_spacing);
  r.get("directional_error_deg", c.directional_error_deg);
  r.get("num_interferers", c.num_interferers);
  r.get("num_rx_elements", c.num_rx_elements);
  r.get("num_streams", c.num_streams);
  r.get("num_rx_chains", c.num_rx_chains);
  r.get("desired_paths", c.desired_paths);
  r.get("subset_search_cap", c.subset_search_cap);
  r.get("mimo_stream_mode", c.mimo_stream_mode);
  r.get("mimo_refine", c.mimo_refine);
  r.get("path_gain_model", c.path_gain_model);
  r.get("carrier_hz", c.carrier_hz);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    const auto line = line_of_key(text, e.field());
    if (line) throw ConfigError(describe(e.field(), line, std::string(e.what()).substr(std::string(e.what()).find(": ") + 2)), e.field(), line);
    throw;
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

std::vector<ExperimentPreset> experiment_presets() {
  const std::vector<double> snr = {-5, 0, 5, 10, 15, 20};
  std::vector<ExperimentPreset> out;
  auto los = [&](std::string name, std::string desc, ExperimentKind kind, std::size_t users, double dmax,
                 double sigma) {
    ExperimentConfig c;
    c.name = name;
    c.experiment = kind;
    c.num_trials = 100;
    c.seed = 2019;
    c.snr_grid_db = snr;
    c.num_users = users;
    c.d_max_wl = dmax;
    c.directional_error_deg = sigma;
    out.push_back({std::move(name), std::move(desc), c});
  };
  los("fig3", "4-user LOS, SIR -5 dB, d_max 50 wl, sigma 0.1 deg", ExperimentKind::kLos4User, 4, 50.0, 0.1);
  los("fig4", "4-user LOS, SIR -5 dB, d_max 100 wl, sigma 0.05 deg", ExperimentKind::kLos4User, 4, 100.0, 0.05);
  los("fig5", "4-user LOS, SIR -5 dB, d_max 500 wl, sigma 0.01 deg", ExperimentKind::kLos4User, 4, 500.0, 0.01);
  los("fig6", "6-user LOS, SIR -5 dB, d_max 200 wl", ExperimentKind::kLos6User, 6, 200.0, 0.0);

  ExperimentConfig sweep;
  sweep.name = "fig7";
  sweep.experiment = ExperimentKind::kDmaxSweep;
  sweep.num_trials = 100;
  sweep.seed = 2019;
  sweep.snr_grid_db = {10.0};
  sweep.d_max_grid_wl = {5, 10, 20, 30, 50, 75, 100, 150, 200};
  out.push_back({"fig7", "4-user LOS, SNR 10 dB, SIR -5 dB, rate vs d_max", sweep});

  auto mimo = [&](std::string name, std::string desc, std::size_t interferers) {
    ExperimentConfig c;
    c.name = name;
    c.experiment = ExperimentKind::kMimo2x3;
    c.num_trials = 50;
    c.seed = 2019;
    c.snr_grid_db = snr;
    c.sir_db = 0.0;
    c.interferer_power_convention = PowerConvention::kPerInterferer;
    c.num_interferers = interferers;
    c.num_rx_elements = 100;
    out.push_back({std::move(name), std::move(desc), c});
  };
  mimo("fig8", "2x3 MIMO, 2 external interferers, N_r 100", 2);
  mimo("fig9", "2x3 MIMO, 4 external interferers, N_r 100", 4);
  return out;
}

}  // namespace ergonull
