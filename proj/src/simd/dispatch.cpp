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


#include <atomic>
#include <stdexcept>

#include "ergonull/simd/kernels.hpp"

namespace ergonull::simd {

#ifndef ERGONULL_HAVE_AVX2
// Build without the vector translation unit: the avx2 entry points exist for
// linkage but are never selected because isa_available(kAvx2) is false.
namespace avx2 {
void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out) { scalar::phase_grid_sinr(in, out); }
ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in) { return scalar::phase_grid_sinr_argmax(in); }
std::uint64_t weyl_box_scan(std::span<const double> c, std::size_t desired, double eps, std::uint64_t a,
                            std::uint64_t b) {
  return scalar::weyl_box_scan(c, desired, eps, a, b);
}
std::uint64_t box_hit_count(std::span<const double> c, std::span<const double> lo, std::span<const double> hi,
                            std::uint64_t n) {
  return scalar::box_hit_count(c, lo, hi, n);
}
}  // namespace avx2
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ERGONULL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2: {
      static const bool ok = cpu_has_avx2();
      return ok;
    }
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar; }

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("ISA not available on this build/CPU");
  active().store(isa, std::memory_order_relaxed);
}

void phase_grid_sinr(const PhaseGridInput& in, std::span<double> out) {
  if (out.size() < in.cos_phi.size()) throw std::invalid_argument("phase_grid_sinr: output too small");
  if (active_isa() == Isa::kAvx2) return avx2::phase_grid_sinr(in, out);
  scalar::phase_grid_sinr(in, out);
}

ArgMax phase_grid_sinr_argmax(const PhaseGridInput& in) {
  if (active_isa() == Isa::kAvx2) return avx2::phase_grid_sinr_argmax(in);
  return scalar::phase_grid_sinr_argmax(in);
}

std::uint64_t weyl_box_scan(std::span<const double> cosines, std::size_t desired, double eps,
                            std::uint64_t d_first, std::uint64_t d_last) {
  if (active_isa() == Isa::kAvx2) return avx2::weyl_box_scan(cosines, desired, eps, d_first, d_last);
  return scalar::weyl_box_scan(cosines, desired, eps, d_first, d_last);
}

std::uint64_t box_hit_count(std::span<const double> cosines, std::span<const double> lower,
                            std::span<const double> upper, std::uint64_t count) {
  if (active_isa() == Isa::kAvx2) return avx2::box_hit_count(cosines, lower, upper, count);
  return scalar::box_hit_count(cosines, lower, upper, count);
}

}  // namespace ergonull::simd
