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


#include "ergonull/ergodic_nulling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ergonull/rates.hpp"
#include "ergonull/simd/kernels.hpp"

namespace ergonull {

BoxSpec BoxSpec::nulling_box(std::size_t num_users, std::size_t desired, double epsilon) {
  if (desired >= num_users) throw std::out_of_range("nulling_box: desired index out of range");
  if (!(epsilon > 0.0 && epsilon < kPi)) throw std::invalid_argument("nulling_box: epsilon must be in (0, pi)");
  BoxSpec box;
  box.epsilon_prime = epsilon / kTwoPi;
  const double e = box.epsilon_prime;
  box.intervals.resize(num_users, {(1.0 - e) / 2.0, (1.0 + e) / 2.0});
  box.intervals[desired] = {0.0, e};
  return box;
}

double BoxSpec::volume() const {
  double v = 1.0;
  for (const auto& [lo, hi] : intervals) v *= hi - lo;
  return v;
}

std::optional<std::uint64_t> weyl_box_search(std::span<const double> cosines, std::size_t desired, double epsilon,
                                             std::uint64_t d_max) {
  if (cosines.empty()) throw std::invalid_argument("weyl_box_search: empty cosine vector");
  if (desired >= cosines.size()) throw std::out_of_range("weyl_box_search: desired index out of range");
  if (!(epsilon > 0.0 && epsilon < kPi)) throw std::invalid_argument("weyl_box_search: epsilon must be in (0, pi)");
  if (d_max == 0) return std::nullopt;
  const std::uint64_t d = simd::weyl_box_scan(cosines, desired, epsilon / kTwoPi, 1, d_max);
  if (d == 0) return std::nullopt;
  return d;
}

double box_hit_fraction(std::span<const double> cosines, std::span<const std::pair<double, double>> box,
                        std::uint64_t count) {
  if (box.size() != cosines.size()) throw std::invalid_argument("box_hit_fraction: dimension mismatch");
  if (count == 0) throw std::invalid_argument("box_hit_fraction: count must be >= 1");
  std::vector<double> lo(box.size());
  std::vector<double> hi(box.size());
  for (std::size_t k = 0; k < box.size(); ++k) {
    lo[k] = box[k].first;
    hi[k] = box[k].second;
  }
  return static_cast<double>(simd::box_hit_count(cosines, lo, hi, count)) / static_cast<double>(count);
}

double equidistribution_discrepancy(std::span<const double> cosines, std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("equidistribution_discrepancy: count must be >= 1");
  if (cosines.empty()) return 0.0;
  const std::size_t dims = cosines.size();
  const double m_total = static_cast<double>(count);
  auto frac = [](double x) { return x - std::floor(x); };

  if (dims == 1) {
    std::vector<double> pts(count);
    for (std::uint64_t m = 1; m <= count; ++m) pts[m - 1] = frac(static_cast<double>(m) * cosines[0]);
    std::sort(pts.begin(), pts.end());
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double rank = static_cast<double>(i);
      d = std::max({d, (rank + 1.0) / m_total - pts[i], pts[i] - rank / m_total});
    }
    return d;
  }

  // Histogram on a G^K cell grid, then a K-dimensional prefix sum yields the
  // count of every anchored box with grid-aligned corner.
  std::size_t g = 2;
  while (std::pow(static_cast<double>(g + 1), static_cast<double>(dims)) <= static_cast<double>(1U << 20) && g < 64)
    ++g;
  std::size_t cells = 1;
  for (std::size_t k = 0; k < dims; ++k) cells *= g;
  std::vector<double> hist(cells, 0.0);
  for (std::uint64_t m = 1; m <= count; ++m) {
    std::size_t idx = 0;
    for (std::size_t k = dims; k-- > 0;) {
      const auto c = std::min(g - 1, static_cast<std::size_t>(frac(static_cast<double>(m) * cosines[k]) * static_cast<double>(g)));
      idx = idx * g + c;
    }
    hist[idx] += 1.0;
  }
  std::size_t stride = 1;
  for (std::size_t k = 0; k < dims; ++k) {
    for (std::size_t idx = 0; idx < cells; ++idx)
      if ((idx / stride) % g != 0) hist[idx] += hist[idx - stride];
    stride *= g;
  }
  double d = 0.0;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    double vol = 1.0;
    std::size_t rem = idx;
    for (std::size_t k = 0; k < dims; ++k) {
      vol *= static_cast<double>(rem % g + 1) / static_cast<double>(g);
      rem /= g;
    }
    d = std::max(d, std::abs(hist[idx] / m_total - vol));
  }
  return d;
}

std::optional<std::uint64_t> nulling_spacing_search(std::span<const double> cosines, std::size_t desired,
                                                    double delta, std::uint64_t d_max, PhaseRule rule) {
  if (cosines.empty()) throw std::invalid_argument("nulling_spacing_search: empty cosine vector");
  if (desired >= cosines.size()) throw std::out_of_range("nulling_spacing_search: desired index out of range");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("nulling_spacing_search: delta must be in (0, 1/2)");
  for (std::uint64_t d = 1; d <= d_max; ++d) {
    const double dd = static_cast<double>(d);
    const double phi = rule == PhaseRule::kMatched ? -kTwoPi * dd * cosines[desired] : 0.0;
    auto gain = [&](std::size_t k) { return 0.5 * (1.0 + std::cos(kTwoPi * dd * cosines[k] + phi)); };
    if (!(gain(desired) > 1.0 - delta)) continue;
    bool ok = true;
    for (std::size_t k = 0; k < cosines.size() && ok; ++k)
      if (k != desired) ok = gain(k) < delta;
    if (ok) return d;
  }
  return std::nullopt;
}

SparseBeamformer support_constrained_mvdr(std::span<const cplx> steering_desired,
                                          std::span<const SteeringVector> steering_interferers,
                                          std::span<const double> powers, double noise_var,
                                          const SelectionMatrix& support) {
  const auto r = static_cast<Eigen::Index>(support.size());
  if (static_cast<Eigen::Index>(steering_desired.size()) != r)
    throw std::invalid_argument("support_constrained_mvdr: desired steering size mismatch");
  if (steering_interferers.size() != powers.size())
    throw std::invalid_argument("support_constrained_mvdr: interferer/power count mismatch");
  if (!(noise_var > 0.0))
    throw std::domain_error("support_constrained_mvdr: singular interference covariance (noise_var must be > 0)");
  CMatrix rn = noise_var * CMatrix::Identity(r, r);
  for (std::size_t j = 0; j < steering_interferers.size(); ++j) {
    if (static_cast<Eigen::Index>(steering_interferers[j].size()) != r)
      throw std::invalid_argument("support_constrained_mvdr: interferer steering size mismatch");
    const CVector a = Eigen::Map<const CVector>(steering_interferers[j].data(), r);
    rn.noalias() += powers[j] * a * a.adjoint();
  }
  const CVector ad = Eigen::Map<const CVector>(steering_desired.data(), r);
  const CVector w = rn.ldlt().solve(ad);
  SparseBeamformer out;
  out.support = support.indices;
  out.weights.assign(w.data(), w.data() + r);
  if (std::abs(out.weights[0]) > 0.0) {
    const cplx scale = 1.0 / out.weights[0];
    for (auto& x : out.weights) x *= scale;
    out.weights[0] = 1.0;
  } else {
    out = out.normalized();
  }
  return out;
}

namespace {

struct Candidate {
  double sinr = -1.0;
  std::size_t antenna = 0;
  double phase = 0.0;
  SparseBeamformer beamformer;
};

}  // namespace

SelectionResult pair_selection_search(const LosScenario& scenario, std::size_t rx_user, const UlaGeometry& geometry,
                                      const PairSearchOptions& options) {
  scenario.validate();
  if (geometry.num_elements() < 2) throw std::invalid_argument("pair_selection_search: need at least 2 elements");
  if (rx_user >= scenario.num_users) throw std::out_of_range("pair_selection_search: rx_user out of range");
  if (!(options.phi_grid_deg > 0.0 && options.phi_grid_deg <= 360.0))
    throw std::invalid_argument("pair_selection_search: phi grid step must be in (0, 360]");

  const std::size_t k_users = scenario.num_users;
  // User order inside the search: desired first, then the others by index.
  std::vector<std::size_t> order{rx_user};
  for (std::size_t j = 0; j < k_users; ++j)
    if (j != rx_user) order.push_back(j);
  std::vector<double> cosines(k_users);
  std::vector<double> powers(k_users);
  for (std::size_t u = 0; u < k_users; ++u) {
    cosines[u] = scenario.doa[rx_user][order[u]].cosine();
    powers[u] = scenario.power[order[u]];
  }

  std::vector<double> cos_phi;
  std::vector<double> sin_phi;
  std::vector<double> phis;
  if (options.mode == PairMode::kPhaseGrid) {
    const auto steps = static_cast<std::size_t>(std::ceil(360.0 / options.phi_grid_deg - 1e-9));
    for (std::size_t s = 0; s < steps; ++s) {
      const double phi = deg_to_rad(static_cast<double>(s) * options.phi_grid_deg);
      phis.push_back(phi);
      cos_phi.push_back(std::cos(phi));
      sin_phi.push_back(std::sin(phi));
    }
  }

  std::vector<double> cos_alpha(k_users);
  std::vector<double> sin_alpha(k_users);
  Candidate best;
  for (std::size_t n = 1; n < geometry.num_elements(); ++n) {
    const double d = geometry.position_wl(n) - geometry.position_wl(0);
    if (options.integer_spacing_only && std::abs(d - std::round(d)) > 1e-9) continue;
    if (options.mode == PairMode::kPhaseGrid) {
      for (std::size_t u = 0; u < k_users; ++u) {
        const double alpha = kTwoPi * d * cosines[u];
        cos_alpha[u] = std::cos(alpha);
        sin_alpha[u] = std::sin(alpha);
      }
      const simd::ArgMax am =
          simd::phase_grid_sinr_argmax({cos_alpha, sin_alpha, powers, scenario.noise_var, cos_phi, sin_phi});
      if (am.value > best.sinr) {
        best.sinr = am.value;
        best.antenna = n;
        best.phase = phis[am.index];
      }
    } else {
      const SelectionMatrix support{{0, n}};
      const SteeringVector a = los_channel_vector(scenario, rx_user, rx_user, support, geometry);
      std::vector<SteeringVector> interferers;
      std::vector<double> ipow;
      for (std::size_t u = 1; u < k_users; ++u) {
        interferers.push_back(los_channel_vector(scenario, rx_user, order[u], support, geometry));
        ipow.push_back(powers[u]);
      }
      SparseBeamformer w = support_constrained_mvdr(a, interferers, ipow, scenario.noise_var, support);
      const double s = output_sinr(w.weights, a, powers[0], interferers, ipow, scenario.noise_var);
      if (s > best.sinr) {
        best.sinr = s;
        best.antenna = n;
        best.phase = std::arg(w.weights[1]);
        best.beamformer = std::move(w);
      }
    }
  }
  if (best.sinr < 0.0) throw std::invalid_argument("pair_selection_search: no admissible antenna pair");

  SelectionResult result;
  result.spacing_wl = geometry.position_wl(best.antenna) - geometry.position_wl(0);
  result.phase = best.phase;
  result.achieved_sinr = best.sinr;
  if (options.mode == PairMode::kPhaseGrid) {
    result.beamformer.support = {0, best.antenna};
    result.beamformer.weights = {cplx(1.0, 0.0), std::polar(1.0, best.phase)};
  } else {
    result.beamformer = std::move(best.beamformer);
  }
  return result;
}

}  // namespace ergonull
