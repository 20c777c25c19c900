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


#include "ergonull/array_manifold.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ergonull {

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

UlaGeometry::UlaGeometry(std::size_t num_elements, double spacing_wl)
    : num_elements_(num_elements), spacing_wl_(spacing_wl) {
  if (num_elements == 0) throw std::invalid_argument("UlaGeometry: num_elements must be >= 1");
  if (!(spacing_wl > 0.0) || !std::isfinite(spacing_wl))
    throw std::invalid_argument("UlaGeometry: spacing_wl must be positive and finite");
}

Direction::Direction(double theta) : theta_(theta), cos_(std::cos(theta)) {
  if (!(theta > 0.0 && theta < kPi))
    throw std::invalid_argument("Direction: theta must lie in (0, pi), got " + std::to_string(theta));
}

Direction Direction::from_degrees(double deg) { return Direction(deg_to_rad(deg)); }

double Direction::degrees() const { return rad_to_deg(theta_); }

void validate_support(const UlaGeometry& geometry, std::span<const std::size_t> support) {
  if (support.empty()) throw std::invalid_argument("support is empty");
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= geometry.num_elements())
      throw std::out_of_range("support index " + std::to_string(support[k]) + " out of range for " +
                              std::to_string(geometry.num_elements()) + " elements");
    if (k > 0 && support[k] <= support[k - 1])
      throw std::invalid_argument("support indices must be strictly increasing");
  }
}

SteeringVector steering_vector(const UlaGeometry& geometry, std::span<const std::size_t> support,
                               const Direction& theta) {
  validate_support(geometry, support);
  SteeringVector out(support.size());
  const double ref = geometry.position_wl(support[0]);
  out[0] = cplx(1.0, 0.0);
  for (std::size_t k = 1; k < support.size(); ++k) {
    const double phase = kTwoPi * (geometry.position_wl(support[k]) - ref) * theta.cosine();
    out[k] = std::polar(1.0, phase);
  }
  return out;
}

double pair_gain(double d_wl, const Direction& theta, double phi) {
  return 0.5 * (1.0 + std::cos(kTwoPi * d_wl * theta.cosine() + phi));
}

double SparseBeamformer::norm_squared() const {
  double acc = 0.0;
  for (const auto& w : weights) acc += std::norm(w);
  return acc;
}

SparseBeamformer SparseBeamformer::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw std::invalid_argument("SparseBeamformer: zero weight vector");
  SparseBeamformer out = *this;
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& w : out.weights) w *= inv;
  return out;
}

cplx SparseBeamformer::response(std::span<const cplx> steering) const {
  if (steering.size() != weights.size())
    throw std::invalid_argument("SparseBeamformer::response: size mismatch");
  cplx acc(0.0, 0.0);
  for (std::size_t k = 0; k < weights.size(); ++k) acc += std::conj(weights[k]) * steering[k];
  return acc;
}

std::vector<double> beam_pattern(const SparseBeamformer& w, const UlaGeometry& geometry,
                                 std::span<const Direction> theta_grid) {
  if (theta_grid.empty()) throw std::invalid_argument("beam_pattern: empty grid");
  if (w.weights.size() != w.support.size())
    throw std::invalid_argument("beam_pattern: weights/support size mismatch");
  validate_support(geometry, w.support);
  const SparseBeamformer unit = w.normalized();
  std::vector<double> gains;
  gains.reserve(theta_grid.size());
  for (const auto& theta : theta_grid) {
    gains.push_back(std::norm(unit.response(steering_vector(geometry, unit.support, theta))));
  }
  return gains;
}

}  // namespace ergonull
