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


#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ergonull {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

double deg_to_rad(double deg);
double rad_to_deg(double rad);

// Uniform linear array. Element n sits at n * spacing_wl wavelengths.
class UlaGeometry {
 public:
  explicit UlaGeometry(std::size_t num_elements, double spacing_wl = 0.5);

  std::size_t num_elements() const { return num_elements_; }
  double spacing_wl() const { return spacing_wl_; }
  double position_wl(std::size_t n) const { return static_cast<double>(n) * spacing_wl_; }
  // Largest baseline available on the array, (N - 1) * pitch.
  double aperture_wl() const { return position_wl(num_elements_ - 1); }

 private:
  std::size_t num_elements_;
  double spacing_wl_;
};

// Far-field direction measured from the array axis; broadside is pi/2.
// Restricted to the open interval (0, pi).
class Direction {
 public:
  Direction() = default;
  explicit Direction(double theta);
  static Direction from_degrees(double deg);

  double theta() const { return theta_; }
  double cosine() const { return cos_; }
  double degrees() const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  double theta_ = kPi / 2;
  double cos_ = 0.0;
};

// Sorted, strictly increasing antenna indices into a UlaGeometry. The first
// index is the phase reference.
using Support = std::vector<std::size_t>;

// Throws std::invalid_argument unless support is nonempty, strictly increasing
// and within the geometry.
void validate_support(const UlaGeometry& geometry, std::span<const std::size_t> support);

// Unit-modulus array response on the selected antennas, referenced to the
// first selected antenna (entry 0 is exactly 1).
using SteeringVector = std::vector<cplx>;

// entry_k = exp(j 2 pi (pos_k - pos_0) cos theta), positions in wavelengths.
SteeringVector steering_vector(const UlaGeometry& geometry, std::span<const std::size_t> support,
                               const Direction& theta);

// Pair gain of w = [1, e^{j phi}]^T / sqrt(2) against the normalized
// two-element response with separation d:
//   g = (1 + cos(2 pi d cos(theta) + phi)) / 2, in [0, 1].
// This is the [0, 1] figure of merit used by the nulling conditions; the
// physical power gain of a unit-norm pair beamformer is up to 2 and is what
// beam_pattern() reports. For w = [1, e^{j phi}]/sqrt(2) the two are related
// by beam_pattern = 2 * pair_gain(d, theta, -phi).
double pair_gain(double d_wl, const Direction& theta, double phi);

// Complex weights with explicit support on a UlaGeometry.
struct SparseBeamformer {
  Support support;
  std::vector<cplx> weights;

  double norm_squared() const;
  // Returns a copy scaled to unit Euclidean norm. Throws on a zero vector.
  SparseBeamformer normalized() const;
  // w^H a for a steering vector evaluated on the same support.
  cplx response(std::span<const cplx> steering) const;
};

// |w^H a(theta)|^2 for the unit-norm rescaling of w over theta_grid.
std::vector<double> beam_pattern(const SparseBeamformer& w, const UlaGeometry& geometry,
                                 std::span<const Direction> theta_grid);

}  // namespace ergonull
