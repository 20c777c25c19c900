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


#include <cmath>

#include "ergonull/simd/kernels.hpp"

namespace ergonull::simd::scalar {

namespace {

inline double sinr_at(const PhaseGridInput& in, double c, double s) {
  const std::size_t users = in.power.size();
  const double g0 = (1.0 + in.cos_alpha[0] * c) + in.sin_alpha[0] * s;
  const double num = in.power[0] * g0;
  double den = 0.0;
  for (std::size_t j = 1; j < users; ++j) {
    const double g = (1.0 + in.cos_alpha[j] * c) + in.sin_alpha[j] * s;
    den = den + in.power[j] * g;
  }
  den = den + in.noise_var;
  return num / den;
}

inline double frac(double x) { return x - std::floor(x); }

}  // namespace

void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out) {
  for (std::size_t k = 0; k < in.cos_phi.size(); ++k) out[k] = sinr_at(in, in.cos_phi[k], in.sin_phi[k]);
}

ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in) {
  ArgMax best{-1.0, 0};
  for (std::size_t k = 0; k < in.cos_phi.size(); ++k) {
    const double v = sinr_at(in, in.cos_phi[k], in.sin_phi[k]);
    if (v > best.value) best = {v, k};
  }
  return best;
}

std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last) {
  const double lo = (1.0 - eps) * 0.5;
  const double hi = (1.0 + eps) * 0.5;
  const double top = 1.0 - eps;
  for (std::uint64_t d = d_first; d <= d_last; ++d) {
    const double dd = static_cast<double>(d);
    const double fd = frac(dd * cosines[desired]);
    if (!(fd < eps || fd > top)) continue;
    bool ok = true;
    for (std::size_t k = 0; k < cosines.size() && ok; ++k) {
      if (k == desired) continue;
      const double f = frac(dd * cosines[k]);
      ok = f > lo && f < hi;
    }
    if (ok) return d;
  }
  return 0;
}

std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count) {
  std::uint64_t hits = 0;
  for (std::uint64_t m = 1; m <= count; ++m) {
    const double mm = static_cast<double>(m);
    bool inside = true;
    for (std::size_t k = 0; k < cosines.size() && inside; ++k) {
      const double f = frac(mm * cosines[k]);
      inside = f >= lower[k] && f < upper[k];
    }
    hits += inside ? 1 : 0;
  }
  return hits;
}

}  // namespace ergonull::simd::scalar
