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

// Data-parallel inner loops. Every kernel has a scalar reference and, where
// the build and the CPU allow it, an AVX2 variant picked at runtime. Variants
// perform the same IEEE operations in the same order (no FMA contraction), so
// they agree bit for bit; tests/test_simd_equivalence.cpp holds them to that.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace ergonull::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
// ISA currently used by the dispatching entry points.
Isa active_isa();
// Forces an ISA (must be available). Intended for tests and benchmarks.
void set_active_isa(Isa isa);

class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) : previous_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

struct ArgMax {
  double value = 0.0;
  std::size_t index = 0;
};

// Pair-beamformer SINR over a phase grid. For user j with pair phase alpha_j
// (passed as cos/sin) and the unit-norm beamformer [1, e^{j phi_k}]/sqrt(2):
//   g_j(k)   = 1 + cos(alpha_j) cos(phi_k) + sin(alpha_j) sin(phi_k)
//   sinr(k)  = power[0] g_0(k) / (sum_{j>=1} power[j] g_j(k) + noise_var)
// User 0 is the desired one. All spans over users share one length; the two
// phase tables share another.
struct PhaseGridInput {
  std::span<const double> cos_alpha;
  std::span<const double> sin_alpha;
  std::span<const double> power;
  double noise_var = 1.0;
  std::span<const double> cos_phi;
  std::span<const double> sin_phi;
};

void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out);
// Largest sinr(k); ties resolve to the smallest k.
ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in);

// Smallest integer d in [d_first, d_last] such that, with f_k = frac(d c_k),
//   f_desired in [0, eps) U (1 - eps, 1)
//   f_k in ((1 - eps)/2, (1 + eps)/2) for every k != desired.
// Returns 0 when no d qualifies. Requires d_first >= 1 and d_last < 2^52.
std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last);

// Number of m in [1, count] whose point frac(m c) lies in the half-open box
// prod_k [lower_k, upper_k).
std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count);

// Direct access to one variant, bypassing dispatch. Used by equivalence tests.
namespace scalar {
void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out);
ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in);
std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last);
std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count);
}  // namespace scalar

namespace avx2 {
void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out);
ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in);
std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last);
std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count);
}  // namespace avx2

}  // namespace ergonull::simd
