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


#include <immintrin.h>

#include <bit>
#include <cmath>

#include "ergonull/simd/kernels.hpp"

namespace ergonull::simd::avx2 {

namespace {

inline __m256d sinr4(const PhaseGridInput& in, __m256d c, __m256d s) {
  const std::size_t users = in.power.size();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d g0 = _mm256_add_pd(one, _mm256_mul_pd(_mm256_set1_pd(in.cos_alpha[0]), c));
  g0 = _mm256_add_pd(g0, _mm256_mul_pd(_mm256_set1_pd(in.sin_alpha[0]), s));
  const __m256d num = _mm256_mul_pd(_mm256_set1_pd(in.power[0]), g0);
  __m256d den = _mm256_setzero_pd();
  for (std::size_t j = 1; j < users; ++j) {
    __m256d g = _mm256_add_pd(one, _mm256_mul_pd(_mm256_set1_pd(in.cos_alpha[j]), c));
    g = _mm256_add_pd(g, _mm256_mul_pd(_mm256_set1_pd(in.sin_alpha[j]), s));
    den = _mm256_add_pd(den, _mm256_mul_pd(_mm256_set1_pd(in.power[j]), g));
  }
  den = _mm256_add_pd(den, _mm256_set1_pd(in.noise_var));
  return _mm256_div_pd(num, den);
}

inline __m256d frac4(__m256d x) { return _mm256_sub_pd(x, _mm256_floor_pd(x)); }

}  // namespace

void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out) {
  const std::size_t n = in.cos_phi.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = sinr4(in, _mm256_loadu_pd(&in.cos_phi[k]), _mm256_loadu_pd(&in.sin_phi[k]));
    _mm256_storeu_pd(&out[k], v);
  }
  if (k < n) {
    PhaseGridInput tail = in;
    tail.cos_phi = in.cos_phi.subspan(k);
    tail.sin_phi = in.sin_phi.subspan(k);
    scalar::phase_grid_sinr(tail, out.subspan(k));
  }
}

ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in) {
  const std::size_t n = in.cos_phi.size();
  ArgMax best{-1.0, 0};
  std::size_t k = 0;
  if (n >= 4) {
    __m256d best_v = _mm256_set1_pd(-1.0);
    __m256d best_i = _mm256_setzero_pd();
    __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    const __m256d step = _mm256_set1_pd(4.0);
    for (; k + 4 <= n; k += 4) {
      const __m256d v = sinr4(in, _mm256_loadu_pd(&in.cos_phi[k]), _mm256_loadu_pd(&in.sin_phi[k]));
      const __m256d better = _mm256_cmp_pd(v, best_v, _CMP_GT_OQ);
      best_v = _mm256_blendv_pd(best_v, v, better);
      best_i = _mm256_blendv_pd(best_i, idx, better);
      idx = _mm256_add_pd(idx, step);
    }
    alignas(32) double vals[4];
    alignas(32) double inds[4];
    _mm256_store_pd(vals, best_v);
    _mm256_store_pd(inds, best_i);
    for (int lane = 0; lane < 4; ++lane) {
      const auto li = static_cast<std::size_t>(inds[lane]);
      if (vals[lane] > best.value || (vals[lane] == best.value && li < best.index)) best = {vals[lane], li};
    }
  }
  if (k < n) {
    PhaseGridInput tail = in;
    tail.cos_phi = in.cos_phi.subspan(k);
    tail.sin_phi = in.sin_phi.subspan(k);
    const ArgMax t = scalar::phase_grid_sinr_argmax(tail);
    if (t.value > best.value) best = {t.value, t.index + k};
  }
  return best;
}

std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last) {
  if (d_last < d_first) return 0;
  const __m256d lo = _mm256_set1_pd((1.0 - eps) * 0.5);
  const __m256d hi = _mm256_set1_pd((1.0 + eps) * 0.5);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d top = _mm256_set1_pd(1.0 - eps);
  const __m256d cd = _mm256_set1_pd(cosines[desired]);
  const __m256d step = _mm256_set1_pd(4.0);
  const double base = static_cast<double>(d_first);
  __m256d dv = _mm256_set_pd(base + 3.0, base + 2.0, base + 1.0, base);
  std::uint64_t d = d_first;
  for (; d + 3 <= d_last; d += 4) {
    const __m256d fd = frac4(_mm256_mul_pd(dv, cd));
    __m256d ok = _mm256_or_pd(_mm256_cmp_pd(fd, veps, _CMP_LT_OQ), _mm256_cmp_pd(fd, top, _CMP_GT_OQ));
    for (std::size_t k = 0; k < cosines.size() && _mm256_movemask_pd(ok) != 0; ++k) {
      if (k == desired) continue;
      const __m256d f = frac4(_mm256_mul_pd(dv, _mm256_set1_pd(cosines[k])));
      ok = _mm256_and_pd(ok, _mm256_and_pd(_mm256_cmp_pd(f, lo, _CMP_GT_OQ), _mm256_cmp_pd(f, hi, _CMP_LT_OQ)));
    }
    const int mask = _mm256_movemask_pd(ok);
    if (mask != 0) return d + static_cast<std::uint64_t>(std::countr_zero(static_cast<unsigned>(mask)));
    dv = _mm256_add_pd(dv, step);
  }
  if (d > d_last) return 0;
  return scalar::weyl_box_scan(cosines, desired, eps, d, d_last);
}

std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count) {
  std::uint64_t hits = 0;
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d mv = _mm256_set_pd(4.0, 3.0, 2.0, 1.0);
  std::uint64_t m = 1;
  for (; m + 3 <= count; m += 4) {
    __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    for (std::size_t k = 0; k < cosines.size(); ++k) {
      const __m256d f = frac4(_mm256_mul_pd(mv, _mm256_set1_pd(cosines[k])));
      inside = _mm256_and_pd(inside, _mm256_cmp_pd(f, _mm256_set1_pd(lower[k]), _CMP_GE_OQ));
      inside = _mm256_and_pd(inside, _mm256_cmp_pd(f, _mm256_set1_pd(upper[k]), _CMP_LT_OQ));
    }
    hits += static_cast<std::uint64_t>(std::popcount(static_cast<unsigned>(_mm256_movemask_pd(inside))));
    mv = _mm256_add_pd(mv, step);
  }
  for (; m <= count; ++m) {
    const double mm = static_cast<double>(m);
    bool in = true;
    for (std::size_t k = 0; k < cosines.size() && in; ++k) {
      const double f = mm * cosines[k] - std::floor(mm * cosines[k]);
      in = f >= lower[k] && f < upper[k];
    }
    hits += in ? 1 : 0;
  }
  return hits;
}

}  // namespace ergonull::simd::avx2
