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


#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "ergonull/ergodic_nulling.hpp"
#include "ergonull/simd/kernels.hpp"

using namespace ergonull;
using namespace ergonull::simd;

namespace {

struct GridCase {
  std::vector<double> ca, sa, p, cp, sp;
  double noise;
  PhaseGridInput input() const { return {ca, sa, p, noise, cp, sp}; }
};

GridCase random_grid_case(std::mt19937_64& rng, std::size_t users, std::size_t phases) {
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  std::uniform_real_distribution<double> pw(0.01, 10.0);
  GridCase g;
  for (std::size_t k = 0; k < users; ++k) {
    const double a = ang(rng);
    g.ca.push_back(std::cos(a));
    g.sa.push_back(std::sin(a));
    g.p.push_back(pw(rng));
  }
  for (std::size_t k = 0; k < phases; ++k) {
    const double f = ang(rng);
    g.cp.push_back(std::cos(f));
    g.sp.push_back(std::sin(f));
  }
  g.noise = pw(rng);
  return g;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("dispatch reports a usable ISA and ScopedIsa restores it") {
  CHECK(isa_available(Isa::kScalar));
  CHECK(isa_available(detected_isa()));
  const Isa before = active_isa();
  {
    ScopedIsa force(Isa::kScalar);
    CHECK(active_isa() == Isa::kScalar);
  }
  CHECK(active_isa() == before);
  CHECK(isa_name(Isa::kScalar) == "scalar");
  CHECK(isa_name(Isa::kAvx2) == "avx2");
  if (!isa_available(Isa::kAvx2)) CHECK_THROWS(set_active_isa(Isa::kAvx2));
}

TEST_CASE("phase-grid SINR: AVX2 matches scalar bit for bit") {
  if (!isa_available(Isa::kAvx2)) {
    MESSAGE("AVX2 unavailable on this host; only the scalar path is exercised");
    return;
  }
  std::mt19937_64 rng(1);
  for (std::size_t users : {1U, 2U, 4U, 7U})
    for (std::size_t phases : {1U, 3U, 4U, 5U, 360U, 3601U}) {
      const GridCase g = random_grid_case(rng, users, phases);
      std::vector<double> a(phases), b(phases);
      scalar::phase_grid_sinr(g.input(), a);
      avx2::phase_grid_sinr(g.input(), b);
      for (std::size_t k = 0; k < phases; ++k) CHECK(same_bits(a[k], b[k]));
      const ArgMax x = scalar::phase_grid_sinr_argmax(g.input());
      const ArgMax y = avx2::phase_grid_sinr_argmax(g.input());
      CHECK(x.index == y.index);
      CHECK(same_bits(x.value, y.value));
    }
}

TEST_CASE("phase-grid argmax breaks ties toward the smallest index") {
  GridCase g;
  g.ca = {1.0};
  g.sa = {0.0};
  g.p = {1.0};
  g.noise = 1.0;
  g.cp = {0.0, 1.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  g.sp = {1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(scalar::phase_grid_sinr_argmax(g.input()).index == 1);
  if (isa_available(Isa::kAvx2)) CHECK(avx2::phase_grid_sinr_argmax(g.input()).index == 1);
}

TEST_CASE("Weyl box scan: AVX2 matches scalar") {
  if (!isa_available(Isa::kAvx2)) return;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<double> cos_k(1 + rep % 5);
    for (double& x : cos_k) x = c(rng);
    const double eps = 0.02 + 0.3 * std::abs(c(rng));
    const std::size_t desired = static_cast<std::size_t>(rep) % cos_k.size();
    for (auto [first, last] : {std::pair<std::uint64_t, std::uint64_t>{1, 3}, {1, 1000}, {7, 50003}, {999, 200000}})
      CHECK(scalar::weyl_box_scan(cos_k, desired, eps, first, last) == avx2::weyl_box_scan(cos_k, desired, eps, first, last));
  }
}

TEST_CASE("box hit count: AVX2 matches scalar") {
  if (!isa_available(Isa::kAvx2)) return;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rep % 4);
    std::vector<double> cs(dim), lo(dim), hi(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      cs[k] = 2.0 * u(rng) - 1.0;
      const double a = u(rng);
      const double b = u(rng);
      lo[k] = std::min(a, b);
      hi[k] = std::max(a, b);
    }
    for (std::uint64_t count : {1ULL, 5ULL, 4096ULL, 100001ULL})
      CHECK(scalar::box_hit_count(cs, lo, hi, count) == avx2::box_hit_count(cs, lo, hi, count));
  }
}

TEST_CASE("library results do not depend on the active ISA") {
  if (!isa_available(Isa::kAvx2)) return;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> th(0.05, 3.09);
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<Direction> dirs;
    for (int k = 0; k < 4; ++k) dirs.emplace_back(th(rng));
    const LosScenario s = LosScenario::single_receiver(dirs, {1.0, 0.8, 0.8, 0.8}, 0.5);
    const UlaGeometry g(201, 0.5);
    PairSearchOptions opt;
    opt.mode = PairMode::kPhaseGrid;
    SelectionResult a;
    SelectionResult b;
    {
      ScopedIsa force(Isa::kScalar);
      a = pair_selection_search(s, 0, g, opt);
    }
    {
      ScopedIsa force(Isa::kAvx2);
      b = pair_selection_search(s, 0, g, opt);
    }
    CHECK(a.beamformer.support == b.beamformer.support);
    CHECK(same_bits(a.achieved_sinr, b.achieved_sinr));
  }
}
