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


#include "ergonull/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace ergonull {

LinkRate LinkRate::from_sinr(double sinr) {
  if (!(sinr >= 0.0)) throw std::invalid_argument("LinkRate: negative SINR");
  return {std::log2(1.0 + sinr), sinr};
}

namespace {

cplx inner(std::span<const cplx> w, std::span<const cplx> a) {
  if (w.size() != a.size()) throw std::invalid_argument("steering/beamformer size mismatch");
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) acc += std::conj(w[k]) * a[k];
  return acc;
}

}  // namespace

double output_sinr(std::span<const cplx> weights, std::span<const cplx> desired, double desired_power,
                   std::span<const SteeringVector> interferers, std::span<const double> interferer_powers,
                   double noise_var) {
  if (interferers.size() != interferer_powers.size())
    throw std::invalid_argument("output_sinr: interferer/power count mismatch");
  double wn = 0.0;
  for (const cplx& w : weights) wn += std::norm(w);
  if (!(wn > 0.0)) throw std::invalid_argument("output_sinr: zero beamformer");
  double interference = 0.0;
  for (std::size_t j = 0; j < interferers.size(); ++j)
    interference += interferer_powers[j] * std::norm(inner(weights, interferers[j]));
  return desired_power * std::norm(inner(weights, desired)) / (interference + noise_var * wn);
}

double sinr(const LosScenario& scenario, std::size_t rx_user, const SparseBeamformer& w,
            const UlaGeometry& geometry) {
  if (rx_user >= scenario.num_users) throw std::out_of_range("sinr: rx_user out of range");
  const SelectionMatrix support{w.support};
  std::vector<SteeringVector> interferers;
  std::vector<double> powers;
  for (std::size_t j = 0; j < scenario.num_users; ++j) {
    if (j == rx_user) continue;
    interferers.push_back(los_channel_vector(scenario, rx_user, j, support, geometry));
    powers.push_back(scenario.power[j]);
  }
  const SteeringVector desired = los_channel_vector(scenario, rx_user, rx_user, support, geometry);
  return output_sinr(w.weights, desired, scenario.power[rx_user], interferers, powers, scenario.noise_var);
}

double log2_det_hpd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw std::domain_error("matrix is not Hermitian positive definite");
  double acc = 0.0;
  const CMatrix& l = llt.matrixLLT();
  for (Eigen::Index k = 0; k < m.rows(); ++k) acc += std::log2(l(k, k).real());
  return 2.0 * acc;
}

double mimo_rate_interference_as_noise(const CMatrix& h_desired, std::span<const CMatrix> h_interferers,
                                       double per_stream_power, double noise_var) {
  const std::vector<double> powers(h_interferers.size(), per_stream_power);
  return mimo_rate_interference_as_noise(h_desired, h_interferers, per_stream_power, powers, noise_var);
}

double mimo_rate_interference_as_noise(const CMatrix& h_desired, std::span<const CMatrix> h_interferers,
                                       double per_stream_power, std::span<const double> interferer_stream_powers,
                                       double noise_var) {
  if (!(noise_var > 0.0)) throw std::invalid_argument("mimo_rate: noise_var must be positive");
  if (h_interferers.size() != interferer_stream_powers.size())
    throw std::invalid_argument("mimo_rate: interferer/power count mismatch");
  const Eigen::Index r = h_desired.rows();
  CMatrix q = noise_var * CMatrix::Identity(r, r);
  for (std::size_t j = 0; j < h_interferers.size(); ++j) {
    if (h_interferers[j].rows() != r) throw std::invalid_argument("mimo_rate: interferer row count mismatch");
    q.noalias() += interferer_stream_powers[j] * h_interferers[j] * h_interferers[j].adjoint();
  }
  // log det(I + p H H^H Q^-1) = log det(Q + p H H^H) - log det(Q)
  CMatrix total = q;
  total.noalias() += per_stream_power * h_desired * h_desired.adjoint();
  return std::max(0.0, log2_det_hpd(total) - log2_det_hpd(q));
}

double interference_free_rate(const LosScenario& scenario, std::size_t rx_user, const SelectionMatrix& support) {
  if (rx_user >= scenario.num_users) throw std::out_of_range("interference_free_rate: rx_user out of range");
  const double r = static_cast<double>(support.size());
  return std::log2(1.0 + r * scenario.power[rx_user] / scenario.noise_var);
}

double orthogonal_benchmark_rate(std::span<const cplx> desired_path_gains, std::size_t streams, double power,
                                 double noise_var) {
  const std::size_t n = std::min(desired_path_gains.size(), streams + 1);
  double acc = 0.0;
  for (std::size_t l = 0; l < n; ++l) acc += std::log2(1.0 + std::norm(desired_path_gains[l]) * power / noise_var);
  return acc;
}

double tdma_mmse_benchmark(const LosScenario& scenario, std::size_t rx_user, const UlaGeometry& geometry,
                           const SelectionMatrix& pair_support) {
  const std::size_t k = scenario.num_users;
  if (k < 2) throw std::invalid_argument("tdma_mmse_benchmark: needs K >= 2");
  if (rx_user >= k) throw std::out_of_range("tdma_mmse_benchmark: rx_user out of range");
  if (pair_support.size() != 2) throw std::invalid_argument("tdma_mmse_benchmark: pair support must have 2 antennas");
  const std::size_t partner = rx_user ^ 1U;
  const SteeringVector a = los_channel_vector(scenario, rx_user, rx_user, pair_support, geometry);
  Eigen::Matrix2cd r = scenario.noise_var * Eigen::Matrix2cd::Identity();
  if (partner < k) {
    const SteeringVector b = los_channel_vector(scenario, rx_user, partner, pair_support, geometry);
    const Eigen::Vector2cd bv(b[0], b[1]);
    r.noalias() += scenario.power[partner] * bv * bv.adjoint();
  }
  const Eigen::Vector2cd av(a[0], a[1]);
  const double sinr_mmse = scenario.power[rx_user] * (av.adjoint() * r.ldlt().solve(av))(0).real();
  const double slots = static_cast<double>((k + 1) / 2);
  return std::log2(1.0 + sinr_mmse) / slots;
}

}  // namespace ergonull
