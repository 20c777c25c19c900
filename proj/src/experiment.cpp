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


#include "ergonull/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

#include "ergonull/ergodic_nulling.hpp"
#include "ergonull/mimo_selection.hpp"
#include "ergonull/random.hpp"
#include "ergonull/rates.hpp"

namespace ergonull {

namespace {

constexpr std::uint64_t kDirectionErrorSalt = 0x6d69736d61746368ULL;
constexpr double kMinSeparationRad = 1e-6;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// One trial's rates, [scheme][x], or the reason it was excluded.
struct TrialOutput {
  bool ok = false;
  std::string error;
  std::uint64_t resampled = 0;
  std::vector<std::vector<double>> rates;
};

using TrialFn = std::function<TrialOutput(std::uint64_t trial)>;

ExperimentResult run_trials(const ExperimentConfig& config, const RunOptions& options, std::string x_label,
                            std::vector<double> x, std::vector<std::string> schemes, const TrialFn& fn) {
  const std::size_t n_trials = config.num_trials;
  std::vector<TrialOutput> outputs(n_trials);
  std::size_t workers = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
  workers = std::min<std::size_t>(workers, n_trials);

  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t t = next.fetch_add(1); t < n_trials; t = next.fetch_add(1)) {
      try {
        outputs[t] = fn(t);
        outputs[t].ok = true;
      } catch (const std::exception& e) {
        outputs[t].ok = false;
        outputs[t].error = "trial " + std::to_string(t) + ": " + e.what();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  RateCurve& c = result.curve;
  c.x_label = std::move(x_label);
  c.x = std::move(x);
  c.schemes = std::move(schemes);
  const std::size_t ns = c.schemes.size();
  const std::size_t nx = c.x.size();
  result.samples.assign(ns, std::vector<std::vector<double>>(nx));
  for (const TrialOutput& out : outputs) {
    result.stats.resampled_draws += out.resampled;
    if (!out.ok) {
      ++result.stats.failed_trials;
      result.stats.failure_messages.push_back(out.error);
      continue;
    }
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t k = 0; k < nx; ++k) result.samples[s][k].push_back(out.rates[s][k]);
  }
  c.mean.assign(ns, std::vector<double>(nx, 0.0));
  c.std_error.assign(ns, std::vector<double>(nx, 0.0));
  c.trials.assign(ns, std::vector<std::size_t>(nx, 0));
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t k = 0; k < nx; ++k) {
      const std::vector<double>& v = result.samples[s][k];
      const std::size_t n = v.size();
      c.trials[s][k] = n;
      if (n == 0) continue;
      double sum = 0.0;
      for (double r : v) sum += r;
      const double mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (double r : v) ss += (r - mean) * (r - mean);
      c.mean[s][k] = mean;
      const bool constant = std::all_of(v.begin(), v.end(), [&](double r) { return r == v.front(); });
      if (constant) c.mean[s][k] = v.front();
      c.std_error[s][k] =
          n > 1 && !constant ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
  }
  return result;
}

double uniform_open_angle(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kPi);
  double th = u(rng);
  while (!(th > 0.0 && th < kPi)) th = u(rng);
  return th;
}

// Draws n directions, redrawing the whole set while any pair is degenerate.
std::vector<double> sample_angles(std::mt19937_64& rng, std::size_t n, std::uint64_t& resampled) {
  std::vector<double> th(n);
  while (true) {
    for (double& a : th) a = uniform_open_angle(rng);
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = a + 1; b < n && ok; ++b) ok = std::abs(th[a] - th[b]) >= kMinSeparationRad;
    if (ok) return th;
    ++resampled;
  }
}

UlaGeometry los_geometry(const ExperimentConfig& config, double d_max_wl) {
  const auto steps = static_cast<std::size_t>(std::floor(d_max_wl / config.array_pitch_wl + 1e-9));
  return UlaGeometry(steps + 1, config.array_pitch_wl);
}

PairSearchOptions pair_options(const ExperimentConfig& config) {
  PairSearchOptions o;
  o.phi_grid_deg = config.phi_grid_deg;
  o.mode = config.selection_mode == "closed-form" ? PairMode::kClosedForm : PairMode::kPhaseGrid;
  o.integer_spacing_only = config.strict_integer_spacing;
  return o;
}

std::vector<std::string> los_schemes(const ExperimentConfig& config) {
  std::vector<std::string> s{"ergodic_nulling"};
  if (config.directional_error_deg > 0.0) s.emplace_back("ergodic_nulling_mismatched");
  s.emplace_back("tdma_mmse");
  s.emplace_back("interference_free");
  return s;
}

// Rates of every LOS scheme at one (geometry, SNR) point, in los_schemes order.
std::vector<double> los_point(const ExperimentConfig& config, const std::vector<Direction>& truth,
                              const std::vector<Direction>* believed, const UlaGeometry& geometry, double snr_db) {
  const LosScenario scen = make_los_scenario(config, truth, snr_db);
  const PairSearchOptions opts = pair_options(config);
  const SelectionMatrix pair{{0, 1}};
  std::vector<double> r;
  const SelectionResult sel = pair_selection_search(scen, 0, geometry, opts);
  r.push_back(std::log2(1.0 + sinr(scen, 0, sel.beamformer, geometry)));
  if (believed != nullptr) {
    const LosScenario est = make_los_scenario(config, *believed, snr_db);
    const SelectionResult mis = pair_selection_search(est, 0, geometry, opts);
    r.push_back(std::log2(1.0 + sinr(scen, 0, mis.beamformer, geometry)));
  }
  r.push_back(tdma_mmse_benchmark(scen, 0, geometry, pair));
  r.push_back(interference_free_rate(scen, 0, pair));
  return r;
}

// Transposes per-x rate vectors into [scheme][x].
std::vector<std::vector<double>> by_scheme(const std::vector<std::vector<double>>& per_x) {
  const std::size_t ns = per_x.empty() ? 0 : per_x.front().size();
  std::vector<std::vector<double>> out(ns, std::vector<double>(per_x.size()));
  for (std::size_t k = 0; k < per_x.size(); ++k)
    for (std::size_t s = 0; s < ns; ++s) out[s][k] = per_x[k][s];
  return out;
}

struct LosDraw {
  std::vector<Direction> truth;
  std::vector<Direction> believed;
  bool mismatched = false;
  std::uint64_t resampled = 0;
};

LosDraw draw_los(const ExperimentConfig& config, std::uint64_t trial) {
  LosDraw d;
  std::mt19937_64 rng = trial_stream(config.seed, trial);
  SampledLos s = sample_los_directions(rng, config.num_users);
  d.truth = std::move(s.doa);
  d.resampled = s.resampled;
  if (config.directional_error_deg > 0.0) {
    std::mt19937_64 err = trial_stream(config.seed, trial, kDirectionErrorSalt);
    d.believed = inject_directional_error(d.truth, config.directional_error_deg, err);
    d.mismatched = true;
  }
  return d;
}

}  // namespace

std::size_t RateCurve::scheme_index(const std::string& label) const {
  const auto it = std::find(schemes.begin(), schemes.end(), label);
  if (it == schemes.end()) throw std::out_of_range("RateCurve: no scheme named '" + label + "'");
  return static_cast<std::size_t>(it - schemes.begin());
}

std::vector<double> user_powers(double desired_power, std::size_t num_interferers, double sir_db,
                                PowerConvention convention) {
  std::vector<double> p(num_interferers + 1, 0.0);
  p[0] = desired_power;
  if (num_interferers == 0) return p;
  double each = desired_power / db_to_linear(sir_db);
  if (convention == PowerConvention::kTotal) each /= static_cast<double>(num_interferers);
  for (std::size_t j = 1; j <= num_interferers; ++j) p[j] = each;
  return p;
}

SampledLos sample_los_directions(std::mt19937_64& rng, std::size_t num_users) {
  SampledLos out;
  const std::vector<double> th = sample_angles(rng, num_users, out.resampled);
  out.doa.reserve(num_users);
  for (double a : th) out.doa.emplace_back(a);
  return out;
}

LosScenario make_los_scenario(const ExperimentConfig& config, const std::vector<Direction>& doa, double snr_db) {
  if (doa.empty()) throw std::invalid_argument("make_los_scenario: no directions");
  return LosScenario::single_receiver(
      doa, user_powers(db_to_linear(snr_db), doa.size() - 1, config.sir_db, config.interferer_power_convention),
      1.0);
}

std::vector<Direction> inject_directional_error(const std::vector<Direction>& doa, double sigma_deg,
                                                std::mt19937_64& rng) {
  if (!(sigma_deg >= 0.0)) throw std::invalid_argument("inject_directional_error: sigma must be >= 0");
  if (sigma_deg == 0.0) return doa;
  std::normal_distribution<double> noise(0.0, sigma_deg);
  // Clamp in radians: the smallest positive degree value underflows to 0
  // after conversion.
  const double lo = std::nextafter(0.0, 1.0);
  const double hi = std::nextafter(kPi, 0.0);
  std::vector<Direction> out;
  out.reserve(doa.size());
  for (const Direction& d : doa) out.emplace_back(std::clamp(deg_to_rad(d.degrees() + noise(rng)), lo, hi));
  return out;
}

SampledMimo sample_mimo_scenario(const ExperimentConfig& config, std::mt19937_64& rng) {
  const std::size_t k = config.num_interferers + 1;
  const std::size_t t = config.num_streams;
  const auto gain_model = config.path_gain_model == "rayleigh" ? PathGainModel::kRayleigh : PathGainModel::kUnitPhase;
  std::uniform_real_distribution<double> delay(0.0, 100.0 / config.carrier_hz);

  SampledMimo out;
  MimoScenario& s = out.scenario;
  s.num_users = k;
  s.streams = t;
  s.rx_chains = config.num_rx_chains;
  s.tx_geometry = UlaGeometry(t, 0.5);
  s.rx_geometry = UlaGeometry(config.num_rx_elements, config.array_pitch_wl);
  s.carrier_hz = config.carrier_hz;
  s.noise_var = 1.0;
  s.tx_streams.assign(k, 1);
  s.tx_streams[0] = t;
  s.paths.assign(k, {});
  s.paths[0].assign(k, {});

  // Arrival angles at receiver 0: desired paths first, then one per interferer.
  const std::vector<double> doa = sample_angles(rng, config.desired_paths + config.num_interferers, out.resampled);
  std::size_t next = 0;
  for (std::size_t l = 0; l < config.desired_paths; ++l) {
    PathSpec p;
    p.doa = Direction(doa[next++]);
    p.dod = Direction(uniform_open_angle(rng));
    p.gain = sample_path_gain(rng, gain_model);
    p.delay_s = delay(rng);
    s.paths[0][0].push_back(p);
  }
  std::stable_sort(s.paths[0][0].begin(), s.paths[0][0].end(),
                   [](const PathSpec& a, const PathSpec& b) { return std::abs(a.gain) > std::abs(b.gain); });
  for (std::size_t j = 1; j < k; ++j) {
    PathSpec p;
    p.doa = Direction(doa[next++]);
    p.dod = Direction(uniform_open_angle(rng));
    p.gain = sample_path_gain(rng, gain_model);
    p.delay_s = delay(rng);
    s.paths[0][j].push_back(p);
  }
  set_mimo_snr(s, config, 0.0);
  s.validate();
  return out;
}

void set_mimo_snr(MimoScenario& scenario, const ExperimentConfig& config, double snr_db) {
  scenario.power = user_powers(db_to_linear(snr_db) * scenario.noise_var, scenario.num_users - 1, config.sir_db,
                               config.interferer_power_convention);
}

ExperimentResult run_rate_vs_snr(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const UlaGeometry geometry = los_geometry(config, config.d_max_wl);
  return run_trials(config, options, "snr_db", config.snr_grid_db, los_schemes(config), [&](std::uint64_t trial) {
    const LosDraw d = draw_los(config, trial);
    std::vector<std::vector<double>> per_x;
    for (double snr : config.snr_grid_db)
      per_x.push_back(los_point(config, d.truth, d.mismatched ? &d.believed : nullptr, geometry, snr));
    TrialOutput out;
    out.rates = by_scheme(per_x);
    out.resampled = d.resampled;
    return out;
  });
}

ExperimentResult run_dmax_sweep(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const double snr = config.snr_grid_db.front();
  return run_trials(config, options, "d_max_wl", config.d_max_grid_wl, los_schemes(config), [&](std::uint64_t trial) {
    const LosDraw d = draw_los(config, trial);
    std::vector<std::vector<double>> per_x;
    for (double d_max : config.d_max_grid_wl)
      per_x.push_back(los_point(config, d.truth, d.mismatched ? &d.believed : nullptr, los_geometry(config, d_max), snr));
    TrialOutput out;
    out.rates = by_scheme(per_x);
    out.resampled = d.resampled;
    return out;
  });
}

ExperimentResult run_mimo_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const std::vector<std::string> schemes{"simplified", "simplified_interference_free", "optimal",
                                         "optimal_interference_free", "max_interference_free"};
  StreamSearchOptions search;
  search.target = config.mimo_stream_mode == "strict" ? StreamTargetMode::kStrict : StreamTargetMode::kRelaxed;
  search.pair_mode = config.selection_mode == "closed-form" ? PairMode::kClosedForm : PairMode::kPhaseGrid;
  search.phi_grid_deg = config.phi_grid_deg;
  return run_trials(config, options, "snr_db", config.snr_grid_db, schemes, [&](std::uint64_t trial) {
    std::mt19937_64 rng = trial_stream(config.seed, trial);
    SampledMimo sampled = sample_mimo_scenario(config, rng);
    MimoScenario& sc = sampled.scenario;
    std::vector<std::vector<double>> per_x;
    for (double snr : config.snr_grid_db) {
      set_mimo_snr(sc, config, snr);
      const StreamAssignment a = per_stream_pair_search(sc, 0, search);
      const SelectionMatrix support = a.support();
      const double simplified = config.mimo_refine ? support_rate(sc, 0, support) : compressed_rate(sc, 0, a);
      const SubsetSearchResult full =
          exhaustive_subset_search(sc, 0, config.num_rx_chains, config.subset_search_cap);
      per_x.push_back({simplified, support_interference_free_rate(sc, 0, support), full.best_rate,
                       full.best_support_interference_free_rate, full.max_interference_free_rate});
    }
    TrialOutput out;
    out.rates = by_scheme(per_x);
    out.resampled = sampled.resampled;
    return out;
  });
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  switch (config.experiment) {
    case ExperimentKind::kLos4User:
    case ExperimentKind::kLos6User:
      return run_rate_vs_snr(config, options);
    case ExperimentKind::kDmaxSweep:
      return run_dmax_sweep(config, options);
    case ExperimentKind::kMimo2x3:
      return run_mimo_experiment(config, options);
  }
  throw std::invalid_argument("run_experiment: unknown experiment kind");
}

}  // namespace ergonull
