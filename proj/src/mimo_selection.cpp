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


#include "ergonull/mimo_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergonull/rates.hpp"

namespace ergonull {

namespace {

struct Source {
  CVector field;  // full-array response, gain included
  double power = 0.0;
};

const PathList& desired_paths(const MimoScenario& scenario, std::size_t rx_user) {
  if (rx_user >= scenario.num_users) throw std::out_of_range("rx_user out of range");
  if (scenario.paths[rx_user].empty()) throw std::invalid_argument("receiver is not populated");
  return scenario.paths[rx_user][rx_user];
}

cplx delay_phase(const MimoScenario& scenario, const PathSpec& p) {
  return std::polar(1.0, kTwoPi * std::fmod(scenario.carrier_hz * p.delay_s, 1.0));
}

CVector path_field(const MimoScenario& scenario, const PathSpec& p) {
  const std::size_t n = scenario.rx_geometry.num_elements();
  CVector v(static_cast<Eigen::Index>(n));
  const cplx g = p.gain * delay_phase(scenario, p);
  for (std::size_t k = 0; k < n; ++k)
    v(static_cast<Eigen::Index>(k)) = g * std::polar(1.0, kTwoPi * scenario.rx_geometry.position_wl(k) * p.doa.cosine());
  return v;
}

// Interfering transmitters' streams as sources on the full receive array.
std::vector<Source> interferer_sources(const MimoScenario& scenario, std::size_t rx_user) {
  const SelectionMatrix all = SelectionMatrix::identity(scenario.rx_geometry.num_elements());
  std::vector<Source> out;
  for (std::size_t j = 0; j < scenario.num_users; ++j) {
    if (j == rx_user || scenario.paths[rx_user][j].empty()) continue;
    for (std::size_t m = 0; m < scenario.streams_of(j); ++m)
      out.push_back({effective_stream_channel(scenario, rx_user, j, m, all), scenario.per_stream_power(j)});
  }
  return out;
}

struct PairChoice {
  double sinr = -1.0;
  std::size_t antenna = 0;
  cplx w1{0.0, 0.0};
};

PairChoice best_pair(const Source& target, const std::vector<const Source*>& interference, double noise_var,
                     std::size_t num_elements, const std::vector<bool>& used, const StreamSearchOptions& opt) {
  PairChoice best;
  std::vector<cplx> phasors;
  if (opt.pair_mode == PairMode::kPhaseGrid) {
    const auto steps = static_cast<std::size_t>(std::ceil(360.0 / opt.phi_grid_deg - 1e-9));
    for (std::size_t s = 0; s < steps; ++s) phasors.push_back(std::polar(1.0, deg_to_rad(static_cast<double>(s) * opt.phi_grid_deg)));
  }
  const cplx h0 = target.field(0);
  for (std::size_t n = 1; n < num_elements; ++n) {
    if (used[n]) continue;
    const auto ni = static_cast<Eigen::Index>(n);
    const cplx h1 = target.field(ni);
    if (opt.pair_mode == PairMode::kClosedForm) {
      double r00 = noise_var;
      double r11 = noise_var;
      cplx r01(0.0, 0.0);
      for (const Source* s : interference) {
        const cplx v0 = s->field(0);
        const cplx v1 = s->field(ni);
        r00 += s->power * std::norm(v0);
        r11 += s->power * std::norm(v1);
        r01 += s->power * v0 * std::conj(v1);
      }
      const double det = r00 * r11 - std::norm(r01);
      // w = R^-1 h
      const cplx w0 = (r11 * h0 - r01 * h1) / det;
      const cplx w1 = (r00 * h1 - std::conj(r01) * h0) / det;
      const double sinr = target.power * (std::conj(h0) * w0 + std::conj(h1) * w1).real();
      if (sinr > best.sinr) {
        best.sinr = sinr;
        best.antenna = n;
        best.w1 = std::abs(w0) > 0.0 ? w1 / w0 : cplx(1.0, 0.0);
      }
    } else {
      for (const cplx& e : phasors) {
        // w = [1, e]; w^H v = v0 + conj(e) v1
        const double num = target.power * std::norm(h0 + std::conj(e) * h1);
        double den = 2.0 * noise_var;
        for (const Source* s : interference) den += s->power * std::norm(s->field(0) + std::conj(e) * s->field(ni));
        const double sinr = num / den;
        if (sinr > best.sinr) {
          best.sinr = sinr;
          best.antenna = n;
          best.w1 = e;
        }
      }
    }
  }
  return best;
}

}  // namespace

SelectionMatrix StreamAssignment::support() const {
  SelectionMatrix s;
  s.indices.push_back(reference);
  for (std::size_t n : antennas) s.indices.push_back(n);
  std::sort(s.indices.begin(), s.indices.end());
  s.indices.erase(std::unique(s.indices.begin(), s.indices.end()), s.indices.end());
  return s;
}

CMatrix StreamAssignment::weight_matrix() const {
  const SelectionMatrix s = support();
  CMatrix w = CMatrix::Zero(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(streams()));
  auto row_of = [&](std::size_t antenna) {
    return static_cast<Eigen::Index>(std::lower_bound(s.indices.begin(), s.indices.end(), antenna) - s.indices.begin());
  };
  for (std::size_t l = 0; l < streams(); ++l) {
    const SparseBeamformer& b = beamformers[l];
    for (std::size_t k = 0; k < b.support.size(); ++k) w(row_of(b.support[k]), static_cast<Eigen::Index>(l)) = b.weights[k];
  }
  return w;
}

std::vector<std::size_t> strongest_paths(const MimoScenario& scenario, std::size_t rx_user) {
  const PathList& paths = desired_paths(scenario, rx_user);
  std::vector<std::size_t> idx(paths.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(paths[a].gain) > std::abs(paths[b].gain); });
  return idx;
}

StreamAssignment per_stream_pair_search(const MimoScenario& scenario, std::size_t rx_user,
                                        const StreamSearchOptions& options) {
  scenario.validate();
  const std::size_t t = scenario.streams_of(rx_user);
  const std::size_t n_el = scenario.rx_geometry.num_elements();
  if (n_el < t + 1) throw std::invalid_argument("per_stream_pair_search: array too small (need N_r >= t + 1)");
  const PathList& paths = desired_paths(scenario, rx_user);

  std::vector<Source> targets;
  std::vector<Source> own_other;  // desired-side sources that may interfere with a given target
  const std::vector<Source> external = interferer_sources(scenario, rx_user);

  if (options.target == StreamTargetMode::kStrict) {
    if (paths.size() < t) throw std::invalid_argument("per_stream_pair_search: need at least t desired paths");
    for (const PathSpec& p : paths) own_other.push_back({path_field(scenario, p), scenario.power[rx_user]});
    const std::vector<std::size_t> order = strongest_paths(scenario, rx_user);
    for (std::size_t l = 0; l < t; ++l) targets.push_back(own_other[order[l]]);
    // own_other is indexed by original path index; targets by strength rank.
    StreamAssignment out;
    std::vector<bool> used(n_el, false);
    used[0] = true;
    for (std::size_t l = 0; l < t; ++l) {
      std::vector<const Source*> interference;
      for (std::size_t q = 0; q < own_other.size(); ++q)
        if (q != order[l]) interference.push_back(&own_other[q]);
      for (const Source& s : external) interference.push_back(&s);
      const PairChoice c = best_pair(targets[l], interference, scenario.noise_var, n_el, used, options);
      if (c.sinr < 0.0) throw std::invalid_argument("per_stream_pair_search: no free antenna left");
      used[c.antenna] = true;
      out.antennas.push_back(c.antenna);
      out.beamformers.push_back({{0, c.antenna}, {cplx(1.0, 0.0), c.w1}});
      out.sinr.push_back(c.sinr);
    }
    return out;
  }

  const SelectionMatrix all = SelectionMatrix::identity(n_el);
  for (std::size_t m = 0; m < t; ++m)
    targets.push_back({effective_stream_channel(scenario, rx_user, rx_user, m, all), scenario.per_stream_power(rx_user)});
  StreamAssignment out;
  std::vector<bool> used(n_el, false);
  used[0] = true;
  for (std::size_t m = 0; m < t; ++m) {
    std::vector<const Source*> interference;
    if (options.own_streams_as_interference)
      for (std::size_t q = 0; q < t; ++q)
        if (q != m) interference.push_back(&targets[q]);
    for (const Source& s : external) interference.push_back(&s);
    const PairChoice c = best_pair(targets[m], interference, scenario.noise_var, n_el, used, options);
    if (c.sinr < 0.0) throw std::invalid_argument("per_stream_pair_search: no free antenna left");
    used[c.antenna] = true;
    out.antennas.push_back(c.antenna);
    out.beamformers.push_back({{0, c.antenna}, {cplx(1.0, 0.0), c.w1}});
    out.sinr.push_back(c.sinr);
  }
  return out;
}

EquivalentChannel assemble_equivalent_channel(const StreamAssignment& assignment, const MimoScenario& scenario,
                                              std::size_t rx_user) {
  const PathList& paths = desired_paths(scenario, rx_user);
  const std::size_t t = assignment.streams();
  const std::vector<std::size_t> order = strongest_paths(scenario, rx_user);
  if (order.size() < t) throw std::invalid_argument("assemble_equivalent_channel: fewer desired paths than streams");
  const SelectionMatrix s = assignment.support();
  const auto r = static_cast<Eigen::Index>(s.size());
  const auto ti = static_cast<Eigen::Index>(t);

  CMatrix a_r(r, ti);
  for (Eigen::Index l = 0; l < ti; ++l) {
    const PathSpec& p = paths[order[static_cast<std::size_t>(l)]];
    for (Eigen::Index k = 0; k < r; ++k)
      a_r(k, l) = std::polar(1.0, kTwoPi * scenario.rx_geometry.position_wl(s.indices[static_cast<std::size_t>(k)]) * p.doa.cosine());
  }
  EquivalentChannel eq;
  eq.w = assignment.weight_matrix();
  for (Eigen::Index l = 0; l < ti; ++l) {
    const cplx resp = eq.w.col(l).dot(a_r.col(l));  // w^H a
    if (std::abs(resp) > 1e-300) eq.w.col(l) *= 1.0 / std::conj(resp);
  }
  eq.deviation = eq.w.adjoint() * a_r - CMatrix::Identity(ti, ti);
  eq.deviation_max_abs = eq.deviation.cwiseAbs().maxCoeff();
  eq.h_tilde = eq.w.adjoint() * narrowband_channel_matrix(scenario, rx_user, rx_user, s);
  return eq;
}

PathFactors desired_path_factors(const MimoScenario& scenario, std::size_t rx_user) {
  const PathList& paths = desired_paths(scenario, rx_user);
  const std::size_t t = scenario.streams_of(rx_user);
  const std::vector<std::size_t> order = strongest_paths(scenario, rx_user);
  if (order.size() < t) throw std::invalid_argument("desired_path_factors: fewer desired paths than streams");
  const auto ti = static_cast<Eigen::Index>(t);
  PathFactors f{CMatrix::Zero(ti, ti), CMatrix(ti, ti)};
  for (Eigen::Index l = 0; l < ti; ++l) {
    const PathSpec& p = paths[order[static_cast<std::size_t>(l)]];
    f.g(l, l) = p.gain * delay_phase(scenario, p);
    for (Eigen::Index m = 0; m < ti; ++m)
      f.a_t(l, m) = std::polar(1.0, kTwoPi * scenario.tx_geometry.position_wl(static_cast<std::size_t>(m)) * p.dod.cosine());
  }
  return f;
}

double theorem2_rate(const CMatrix& g, const CMatrix& a_t, double power, double noise_var, std::size_t streams) {
  if (streams == 0) throw std::invalid_argument("theorem2_rate: streams must be >= 1");
  if (!(noise_var > 0.0)) throw std::invalid_argument("theorem2_rate: noise_var must be positive");
  const CMatrix h = g * a_t;
  const double c = power / (noise_var * static_cast<double>(streams));
  const CMatrix m = CMatrix::Identity(h.rows(), h.rows()) + c * h * h.adjoint();
  return std::max(0.0, log2_det_hpd(m));
}

WaterfillingResult csit_rate_waterfilling(const CMatrix& h, double total_power, double noise_var) {
  if (!(total_power > 0.0)) throw std::invalid_argument("csit_rate_waterfilling: power must be positive");
  if (!(noise_var > 0.0)) throw std::invalid_argument("csit_rate_waterfilling: noise_var must be positive");
  const Eigen::Index n = h.cols();
  Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double tol = std::max(h.rows(), h.cols()) * std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv(0) : 0.0);
  std::vector<double> gains;  // s^2 / sigma^2, descending
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > tol) gains.push_back(sv(k) * sv(k) / noise_var);

  WaterfillingResult out;
  out.mode_powers.assign(static_cast<std::size_t>(n), 0.0);
  if (gains.empty()) {
    out.covariance = (total_power / static_cast<double>(n)) * CMatrix::Identity(n, n);
    return out;
  }
  std::size_t active = gains.size();
  double level = 0.0;
  while (active > 0) {
    double inv_sum = 0.0;
    for (std::size_t k = 0; k < active; ++k) inv_sum += 1.0 / gains[k];
    level = (total_power + inv_sum) / static_cast<double>(active);
    if (level - 1.0 / gains[active - 1] > 0.0) break;
    --active;
  }
  out.water_level = level;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < active; ++k) {
    p(static_cast<Eigen::Index>(k)) = level - 1.0 / gains[k];
    out.rate += std::log2(1.0 + gains[k] * p(static_cast<Eigen::Index>(k)));
  }
  // Exact trace: absorb rounding into the strongest mode.
  p(0) += total_power - p.sum();
  for (Eigen::Index k = 0; k < n; ++k) out.mode_powers[static_cast<std::size_t>(k)] = p(k);
  const CMatrix& v = svd.matrixV();
  out.covariance = v * p.cast<cplx>().asDiagonal() * v.adjoint();
  return out;
}

namespace {

struct SupportChannels {
  CMatrix desired;
  std::vector<CMatrix> interferers;
  std::vector<double> interferer_powers;
  double desired_power = 0.0;
};

SupportChannels channels_on(const MimoScenario& scenario, std::size_t rx_user, const SelectionMatrix& support) {
  desired_paths(scenario, rx_user);
  SupportChannels c;
  c.desired = narrowband_channel_matrix(scenario, rx_user, rx_user, support);
  c.desired_power = scenario.per_stream_power(rx_user);
  for (std::size_t j = 0; j < scenario.num_users; ++j) {
    if (j == rx_user || scenario.paths[rx_user][j].empty()) continue;
    c.interferers.push_back(narrowband_channel_matrix(scenario, rx_user, j, support));
    c.interferer_powers.push_back(scenario.per_stream_power(j));
  }
  return c;
}

double hermitian_det3(const CMatrix& m, std::size_t a, std::size_t b, std::size_t c) {
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ib = static_cast<Eigen::Index>(b);
  const auto ic = static_cast<Eigen::Index>(c);
  const double d1 = m(ia, ia).real();
  const double d2 = m(ib, ib).real();
  const double d3 = m(ic, ic).real();
  const cplx x12 = m(ia, ib);
  const cplx x23 = m(ib, ic);
  const cplx x13 = m(ia, ic);
  return d1 * d2 * d3 + 2.0 * (x12 * x23 * std::conj(x13)).real() - d1 * std::norm(x23) - d2 * std::norm(x13) -
         d3 * std::norm(x12);
}

double log2_det_sub(const CMatrix& m, const std::vector<std::size_t>& idx) {
  if (idx.size() == 3) return std::log2(hermitian_det3(m, idx[0], idx[1], idx[2]));
  const auto r = static_cast<Eigen::Index>(idx.size());
  CMatrix sub(r, r);
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < r; ++b)
      sub(a, b) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]), static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
  return log2_det_hpd(sub);
}

}  // namespace

double support_rate(const MimoScenario& scenario, std::size_t rx_user, const SelectionMatrix& support) {
  const SupportChannels c = channels_on(scenario, rx_user, support);
  return mimo_rate_interference_as_noise(c.desired, c.interferers, c.desired_power, c.interferer_powers,
                                         scenario.noise_var);
}

double support_interference_free_rate(const MimoScenario& scenario, std::size_t rx_user,
                                      const SelectionMatrix& support) {
  const SupportChannels c = channels_on(scenario, rx_user, support);
  return mimo_rate_interference_as_noise(c.desired, {}, c.desired_power, std::span<const double>{},
                                         scenario.noise_var);
}

double compressed_rate(const MimoScenario& scenario, std::size_t rx_user, const StreamAssignment& assignment) {
  const SelectionMatrix s = assignment.support();
  const SupportChannels c = channels_on(scenario, rx_user, s);
  const CMatrix w = assignment.weight_matrix();
  CMatrix q = scenario.noise_var * (w.adjoint() * w);
  for (std::size_t j = 0; j < c.interferers.size(); ++j) {
    const CMatrix hj = w.adjoint() * c.interferers[j];
    q.noalias() += c.interferer_powers[j] * hj * hj.adjoint();
  }
  const CMatrix hd = w.adjoint() * c.desired;
  CMatrix total = q;
  total.noalias() += c.desired_power * hd * hd.adjoint();
  return std::max(0.0, log2_det_hpd(total) - log2_det_hpd(q));
}

SubsetSearchResult exhaustive_subset_search(const MimoScenario& scenario, std::size_t rx_user,
                                            std::size_t subset_size, std::size_t max_elements) {
  scenario.validate();
  const std::size_t n = scenario.rx_geometry.num_elements();
  if (n > max_elements)
    throw std::invalid_argument("exhaustive_subset_search: " + std::to_string(n) + " elements exceed the cap of " +
                                std::to_string(max_elements) + "; raise the cap explicitly to proceed");
  if (subset_size == 0 || subset_size > n) throw std::invalid_argument("exhaustive_subset_search: bad subset size");

  const SupportChannels full = channels_on(scenario, rx_user, SelectionMatrix::identity(n));
  const auto ni = static_cast<Eigen::Index>(n);
  CMatrix q = scenario.noise_var * CMatrix::Identity(ni, ni);
  for (std::size_t j = 0; j < full.interferers.size(); ++j)
    q.noalias() += full.interferer_powers[j] * full.interferers[j] * full.interferers[j].adjoint();
  const CMatrix signal = full.desired_power * full.desired * full.desired.adjoint();
  const CMatrix total = q + signal;
  const CMatrix clean = CMatrix::Identity(ni, ni) + signal / scenario.noise_var;

  SubsetSearchResult out;
  out.best_rate = -1.0;
  out.max_interference_free_rate = -1.0;
  std::vector<std::size_t> idx(subset_size);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    const double rate = std::max(0.0, log2_det_sub(total, idx) - log2_det_sub(q, idx));
    const double clean_rate = std::max(0.0, log2_det_sub(clean, idx));
    if (rate > out.best_rate) {
      out.best_rate = rate;
      out.best_support.indices = idx;
      out.best_support_interference_free_rate = clean_rate;
    }
    out.max_interference_free_rate = std::max(out.max_interference_free_rate, clean_rate);
    ++out.subsets_evaluated;
    // next combination in lexicographic order
    std::size_t k = subset_size;
    while (k > 0 && idx[k - 1] == n - subset_size + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t q2 = k; q2 < subset_size; ++q2) idx[q2] = idx[q2 - 1] + 1;
  }
  return out;
}

}  // namespace ergonull
