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


// ergonull command-line front end.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime or numeric
// failure, 4 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ergonull/array_manifold.hpp"
#include "ergonull/curve_io.hpp"
#include "ergonull/ergodic_nulling.hpp"
#include "ergonull/experiment.hpp"
#include "ergonull/experiment_config.hpp"
#include "ergonull/rates.hpp"
#include "ergonull/simd/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ergonull;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct PairArgs {
  std::vector<double> doas_deg;
  std::size_t desired = 0;
  double d_max_wl = 25.0;
  double pitch_wl = 0.5;
  double snr_db = 0.0;
  double phi_grid_deg = 1.0;
  std::string mode = "phase-grid";
  bool integer_spacing = false;
};

struct RunArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  bool strict_integer_spacing = false;
  std::string power_convention;
};

struct PairOutcome {
  LosScenario scenario;
  UlaGeometry geometry{2, 0.5};
  SelectionResult selection;
};

void add_pair_options(CLI::App* cmd, PairArgs& a) {
  cmd->add_option("--doas", a.doas_deg, "Directions of arrival in degrees, (0, 180) exclusive")->required()->delimiter(',');
  cmd->add_option("--desired", a.desired, "Index of the desired direction in --doas");
  cmd->add_option("--d-max", a.d_max_wl, "Largest antenna separation in wavelengths");
  cmd->add_option("--pitch", a.pitch_wl, "Array element pitch in wavelengths");
  cmd->add_option("--snr-db", a.snr_db, "Per-user SNR in dB (all users at equal power)");
  cmd->add_option("--phi-grid", a.phi_grid_deg, "Phase grid step in degrees");
  cmd->add_option("--mode", a.mode, "phase-grid or closed-form")->check(CLI::IsMember({"phase-grid", "closed-form"}));
  cmd->add_flag("--strict-integer-spacing,--integer-spacing", a.integer_spacing,
                "Only consider integer-wavelength separations");
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config_path, "Experiment config (JSON)")->required();
  cmd->add_option("--out", a.out_dir, "Output directory");
  cmd->add_option("--seed", a.seed, "Override the config seed");
  cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
  cmd->add_flag("--strict-integer-spacing", a.strict_integer_spacing, "Only integer-wavelength separations");
  cmd->add_option("--interferer-power-convention", a.power_convention, "total or per")
      ->check(CLI::IsMember({"total", "per"}));
}

// The desired user is moved to index 0; the others keep their order.
PairOutcome select_pair(const PairArgs& a) {
  if (a.doas_deg.empty()) throw ConfigError("at least one direction is required", "doas");
  if (a.desired >= a.doas_deg.size()) throw ConfigError("--desired is out of range", "desired");
  if (!(a.pitch_wl > 0.0)) throw ConfigError("--pitch must be positive", "pitch");
  if (!(a.d_max_wl >= a.pitch_wl)) throw ConfigError("--d-max must be at least one pitch", "d-max");
  for (double deg : a.doas_deg)
    if (!(deg > 0.0 && deg < 180.0))
      throw ConfigError("direction " + format_double(deg) + " deg is outside (0, 180)", "doas");
  std::vector<Direction> doa;
  doa.push_back(Direction::from_degrees(a.doas_deg[a.desired]));
  for (std::size_t k = 0; k < a.doas_deg.size(); ++k)
    if (k != a.desired) doa.push_back(Direction::from_degrees(a.doas_deg[k]));
  const double p = std::pow(10.0, a.snr_db / 10.0);
  PairOutcome out{LosScenario::single_receiver(doa, std::vector<double>(doa.size(), p), 1.0),
                  UlaGeometry(static_cast<std::size_t>(std::floor(a.d_max_wl / a.pitch_wl + 1e-9)) + 1, a.pitch_wl),
                  {}};
  PairSearchOptions opt;
  opt.phi_grid_deg = a.phi_grid_deg;
  opt.mode = a.mode == "closed-form" ? PairMode::kClosedForm : PairMode::kPhaseGrid;
  opt.integer_spacing_only = a.integer_spacing;
  out.selection = pair_selection_search(out.scenario, 0, out.geometry, opt);
  return out;
}

json selection_json(const PairArgs& a, const PairOutcome& o) {
  const SparseBeamformer w = o.selection.beamformer.normalized();
  json gains = json::array();
  for (std::size_t k = 0; k < o.scenario.num_users; ++k) {
    const SteeringVector s = steering_vector(o.geometry, w.support, o.scenario.doa[0][k]);
    gains.push_back(std::norm(w.response(s)));
  }
  json weights = json::array();
  for (const cplx& x : o.selection.beamformer.weights) weights.push_back({x.real(), x.imag()});
  return {{"doas_deg", a.doas_deg},
          {"desired", a.desired},
          {"d_max_wl", a.d_max_wl},
          {"pitch_wl", a.pitch_wl},
          {"snr_db", a.snr_db},
          {"mode", a.mode},
          {"integer_spacing", a.integer_spacing},
          {"spacing_wl", o.selection.spacing_wl},
          {"antennas", o.selection.beamformer.support},
          {"phi_rad", o.selection.phase},
          {"phi_deg", rad_to_deg(o.selection.phase)},
          {"weights", weights},
          {"sinr", o.selection.achieved_sinr},
          {"rate_bits", std::log2(1.0 + o.selection.achieved_sinr)},
          // beam gains |w^H a|^2 (unit-norm w, max 2), desired user first
          {"beam_gains", gains}};
}

int cmd_beampattern(const PairArgs& a, const std::string& out_path, bool verbose) {
  const PairOutcome o = select_pair(a);
  std::vector<Direction> grid;
  std::vector<double> theta;
  grid.reserve(1800);
  for (int k = 0; k < 1800; ++k) {
    theta.push_back((k + 0.5) * 0.1);
    grid.push_back(Direction::from_degrees(theta.back()));
  }
  const std::vector<double> gain = beam_pattern(o.selection.beamformer, o.geometry, grid);
  const fs::path csv(out_path);
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  write_beam_pattern_csv(theta, gain, csv);
  fs::path sidecar = csv;
  sidecar.replace_extension(".manifest.json");
  const json m = selection_json(a, o);
  write_text_file(sidecar, m.dump(2) + "\n");
  if (verbose) std::cerr << m.dump(2) << "\n";
  std::cout << "spacing_wl=" << format_double(o.selection.spacing_wl) << " phi_deg=" << rad_to_deg(o.selection.phase)
            << " -> " << csv.string() << "\n";
  return kExitOk;
}

int cmd_select(const PairArgs& a, const std::string& out_path) {
  const PairOutcome o = select_pair(a);
  const json m = selection_json(a, o);
  if (!out_path.empty()) {
    const fs::path p(out_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_text_file(p, m.dump(2) + "\n");
  }
  std::cout << m.dump(2) << "\n";
  return kExitOk;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int cmd_run(const RunArgs& a, bool mimo_only, bool verbose) {
  ExperimentConfig config = load_experiment_config(a.config_path);
  if (a.seed) config.seed = *a.seed;
  if (a.strict_integer_spacing) config.strict_integer_spacing = true;
  if (a.power_convention == "total") config.interferer_power_convention = PowerConvention::kTotal;
  if (a.power_convention == "per") config.interferer_power_convention = PowerConvention::kPerInterferer;
  config.validate();
  if (mimo_only && config.experiment != ExperimentKind::kMimo2x3)
    throw ConfigError("mimo-run needs a mimo-2x3 config", "experiment");

  const fs::path out_dir(a.out_dir);
  fs::create_directories(out_dir);
  if (verbose)
    std::cerr << "running " << config.name << " (" << to_string(config.experiment) << ", " << config.num_trials
              << " trials, kernels " << simd::isa_name(simd::active_isa()) << ")\n";
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(config, RunOptions{a.threads});
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (result.stats.failed_trials == config.num_trials) {
    const std::string first = result.stats.failure_messages.empty() ? "" : result.stats.failure_messages.front();
    throw std::runtime_error("every trial failed; first failure: " + first);
  }
  const fs::path csv = out_dir / (config.name + ".csv");
  write_curve_csv(result.curve, csv);
  const json entry = {{"name", config.name},
                      {"experiment", to_string(config.experiment)},
                      {"config_hash", hex64(config.hash())},
                      {"seed", config.seed},
                      {"num_trials", config.num_trials},
                      {"failed_trials", result.stats.failed_trials},
                      {"resampled_draws", result.stats.resampled_draws},
                      {"threads", a.threads},
                      {"wall_time_s", wall},
                      {"csv", csv.filename().string()},
                      {"config", config.to_json()}};
  append_text_file(out_dir / "manifest.jsonl", entry.dump() + "\n");
  if (verbose) {
    for (const std::string& msg : result.stats.failure_messages) std::cerr << "excluded " << msg << "\n";
    std::cerr << "resampled draws: " << result.stats.resampled_draws << ", wall time " << wall << " s\n";
  }
  if (result.stats.failed_trials > 0)
    std::cerr << "warning: " << result.stats.failed_trials << " trial(s) excluded; see manifest.jsonl\n";
  std::cout << csv.string() << "\n";
  return kExitOk;
}

int cmd_list(const std::string& write_dir) {
  for (const ExperimentPreset& p : experiment_presets()) {
    std::cout << p.name << "\t" << to_string(p.config.experiment) << "\t" << p.description << "\n";
    if (!write_dir.empty()) {
      fs::create_directories(write_dir);
      write_text_file(fs::path(write_dir) / (p.name + ".json"), p.config.to_json().dump(2) + "\n");
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergonull: two-chain interference nulling on large linear arrays"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Progress and diagnostics on stderr");

  PairArgs pair;
  std::string bp_out = "beampattern.csv";
  CLI::App* bp = app.add_subcommand("beampattern", "Select a pair and write its beam pattern over a 0.1 deg grid");
  add_pair_options(bp, pair);
  bp->add_option("--out", bp_out, "Output CSV path (a .manifest.json sidecar is written next to it)");

  std::string select_out;
  CLI::App* sel = app.add_subcommand("select", "Select a pair for one scenario and print it as JSON");
  add_pair_options(sel, pair);
  sel->add_option("--out", select_out, "Also write the JSON to this path");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment config");
  add_run_options(run_cmd, run);
  CLI::App* mimo_cmd = app.add_subcommand("mimo-run", "Run a mimo-2x3 experiment config");
  add_run_options(mimo_cmd, run);

  std::string write_dir;
  CLI::App* list = app.add_subcommand("list-experiments", "List built-in experiment presets");
  list->add_option("--write-configs", write_dir, "Write each preset as <name>.json into this directory");

  for (CLI::App* sub : {bp, sel, run_cmd, mimo_cmd, list})
    sub->add_flag("-v,--verbose", verbose, "Progress and diagnostics on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (bp->parsed()) return cmd_beampattern(pair, bp_out, verbose);
    if (sel->parsed()) return cmd_select(pair, select_out);
    if (run_cmd->parsed()) return cmd_run(run, false, verbose);
    if (mimo_cmd->parsed()) return cmd_run(run, true, verbose);
    if (list->parsed()) return cmd_list(write_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
