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


#include "ergonull/channel_models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ergonull {

namespace {

void check_user(std::size_t user, std::size_t num_users, const char* what) {
  if (user >= num_users)
    throw std::out_of_range(std::string(what) + " index " + std::to_string(user) + " out of range for " +
                            std::to_string(num_users) + " users");
}

void check_square(const auto& rows, std::size_t k, const char* name) {
  if (rows.size() != k) throw std::invalid_argument(std::string(name) + " must have K rows");
  for (const auto& row : rows)
    if (row.size() != k) throw std::invalid_argument(std::string(name) + " must be K x K");
}

void check_powers(const std::vector<double>& power, std::size_t k) {
  if (power.size() != k) throw std::invalid_argument("power must have K entries");
  for (double p : power)
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("powers must be finite and nonnegative");
}

}  // namespace

Eigen::MatrixXd SelectionMatrix::dense(std::size_t num_elements) const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_elements),
                                            static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= num_elements) throw std::out_of_range("selection index out of range");
    s(static_cast<Eigen::Index>(indices[k]), static_cast<Eigen::Index>(k)) = 1.0;
  }
  return s;
}

SelectionMatrix SelectionMatrix::then(const SelectionMatrix& inner) const {
  SelectionMatrix out;
  out.indices.reserve(inner.size());
  for (std::size_t k : inner.indices) {
    if (k >= indices.size()) throw std::out_of_range("inner selection exceeds outer selection size");
    out.indices.push_back(indices[k]);
  }
  return out;
}

SelectionMatrix SelectionMatrix::identity(std::size_t n) {
  SelectionMatrix s;
  s.indices.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.indices[k] = k;
  return s;
}

void LosScenario::validate() const {
  if (num_users == 0) throw std::invalid_argument("LosScenario: num_users must be >= 1");
  check_square(doa, num_users, "doa");
  check_powers(power, num_users);
  if (!(noise_var > 0.0)) throw std::invalid_argument("LosScenario: noise_var must be positive");
  if (power_cap > 0.0)
    for (double p : power)
      if (p > power_cap) throw std::invalid_argument("LosScenario: power exceeds declared cap");
}

LosScenario LosScenario::single_receiver(std::vector<Direction> doa_at_receiver, std::vector<double> power,
                                         double noise_var) {
  LosScenario s;
  s.num_users = doa_at_receiver.size();
  s.doa.assign(s.num_users, doa_at_receiver);
  s.power = std::move(power);
  s.noise_var = noise_var;
  s.validate();
  return s;
}

void MultipathScenario::validate() const {
  if (num_users == 0) throw std::invalid_argument("MultipathScenario: num_users must be >= 1");
  check_square(paths, num_users, "paths");
  check_powers(power, num_users);
  if (!(noise_var > 0.0)) throw std::invalid_argument("MultipathScenario: noise_var must be positive");
}

void MimoScenario::validate() const {
  if (num_users == 0) throw std::invalid_argument("MimoScenario: num_users must be >= 1");
  if (streams == 0) throw std::invalid_argument("MimoScenario: streams must be >= 1");
  if (paths.size() != num_users) throw std::invalid_argument("MimoScenario: paths must have K rows");
  for (const auto& row : paths)
    if (!row.empty() && row.size() != num_users)
      throw std::invalid_argument("MimoScenario: populated path rows must have K entries");
  check_powers(power, num_users);
  if (tx_streams.size() != num_users) throw std::invalid_argument("MimoScenario: tx_streams must have K entries");
  for (std::size_t s : tx_streams)
    if (s == 0 || s > tx_geometry.num_elements())
      throw std::invalid_argument("MimoScenario: per-transmitter streams must be in [1, N_t]");
  if (!(noise_var > 0.0)) throw std::invalid_argument("MimoScenario: noise_var must be positive");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("MimoScenario: carrier_hz must be positive");
}

double MimoScenario::per_stream_power(std::size_t user) const {
  return power.at(user) / static_cast<double>(streams_of(user));
}

cplx sample_path_gain(std::mt19937_64& rng, PathGainModel model) {
  switch (model) {
    case PathGainModel::kUnitPhase: {
      std::uniform_real_distribution<double> phase(0.0, kTwoPi);
      return std::polar(1.0, phase(rng));
    }
    case PathGainModel::kRayleigh: {
      std::normal_distribution<double> n(0.0, std::sqrt(0.5));
      const double re = n(rng);
      const double im = n(rng);
      return {re, im};
    }
  }
  throw std::invalid_argument("unknown path gain model");
}

SteeringVector los_channel_vector(const LosScenario& scenario, std::size_t rx_user, std::size_t tx_user,
                                  const SelectionMatrix& support, const UlaGeometry& geometry) {
  check_user(rx_user, scenario.num_users, "rx_user");
  check_user(tx_user, scenario.num_users, "tx_user");
  return steering_vector(geometry, support.indices, scenario.doa[rx_user][tx_user]);
}

namespace {

const PathList& path_list(const MimoScenario& scenario, std::size_t i, std::size_t j) {
  check_user(i, scenario.num_users, "rx_user");
  check_user(j, scenario.num_users, "tx_user");
  if (scenario.paths[i].empty()) throw std::invalid_argument("receiver " + std::to_string(i) + " is not populated");
  const PathList& paths = scenario.paths[i][j];
  if (paths.empty()) throw std::invalid_argument("empty path list");
  return paths;
}

CVector to_eigen(const SteeringVector& v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

// Full-array response a(theta) restricted to the support. Unlike
// steering_vector() the phase is referenced to array element 0, so channels
// built on different supports describe the same physical field.
CVector rx_response(const UlaGeometry& rx, const SelectionMatrix& support, const Direction& doa) {
  const CVector a = to_eigen(steering_vector(rx, support.indices, doa));
  return a * std::polar(1.0, kTwoPi * rx.position_wl(support.indices[0]) * doa.cosine());
}

// Transmit steering entries are referenced to antenna 0 of the transmit
// array regardless of which antennas are selected.
cplx tx_entry(const UlaGeometry& tx, std::size_t antenna, const Direction& dod) {
  return std::polar(1.0, kTwoPi * tx.position_wl(antenna) * dod.cosine());
}

}  // namespace

CMatrix mimo_channel_matrix(const MimoScenario& scenario, std::size_t i, std::size_t j,
                            const SelectionMatrix& rx_support, const SelectionMatrix& tx_support) {
  const PathList& paths = path_list(scenario, i, j);
  validate_support(scenario.tx_geometry, tx_support.indices);
  const auto r = static_cast<Eigen::Index>(rx_support.size());
  const auto t = static_cast<Eigen::Index>(tx_support.size());
  CMatrix h = CMatrix::Zero(r, t);
  for (const PathSpec& p : paths) {
    const CVector ar = rx_response(scenario.rx_geometry, rx_support, p.doa);
    CVector at(t);
    for (Eigen::Index k = 0; k < t; ++k)
      at(k) = tx_entry(scenario.tx_geometry, tx_support.indices[static_cast<std::size_t>(k)], p.dod);
    h.noalias() += p.gain * ar * at.transpose();
  }
  return h;
}

CVector effective_stream_channel(const MimoScenario& scenario, std::size_t i, std::size_t j, std::size_t m,
                                 const SelectionMatrix& rx_support) {
  const PathList& paths = path_list(scenario, i, j);
  if (m >= scenario.streams_of(j))
    throw std::out_of_range("stream index " + std::to_string(m) + " >= stream count of transmitter " +
                            std::to_string(j));
  CVector h = CVector::Zero(static_cast<Eigen::Index>(rx_support.size()));
  for (const PathSpec& p : paths) {
    const cplx delay_phase = std::polar(1.0, kTwoPi * std::fmod(scenario.carrier_hz * p.delay_s, 1.0));
    const CVector ar = rx_response(scenario.rx_geometry, rx_support, p.doa);
    h.noalias() += (p.gain * delay_phase * tx_entry(scenario.tx_geometry, m, p.dod)) * ar;
  }
  return h;
}

CMatrix narrowband_channel_matrix(const MimoScenario& scenario, std::size_t i, std::size_t j,
                                  const SelectionMatrix& rx_support) {
  const std::size_t s = scenario.streams_of(j);
  CMatrix h(static_cast<Eigen::Index>(rx_support.size()), static_cast<Eigen::Index>(s));
  for (std::size_t m = 0; m < s; ++m) h.col(static_cast<Eigen::Index>(m)) = effective_stream_channel(scenario, i, j, m, rx_support);
  return h;
}

double residual_interference_power(const MultipathScenario& scenario, std::size_t rx_user,
                                   const SparseBeamformer& w, const UlaGeometry& geometry) {
  check_user(rx_user, scenario.num_users, "rx_user");
  double total = 0.0;
  for (std::size_t k = 0; k < scenario.num_users; ++k) {
    if (k == rx_user) continue;
    double user_sum = 0.0;
    for (const PathSpec& p : scenario.paths[rx_user][k])
      user_sum += std::norm(w.response(steering_vector(geometry, w.support, p.doa))) * std::norm(p.gain);
    total += scenario.power[k] * user_sum;
  }
  return total;
}

}  // namespace ergonull
