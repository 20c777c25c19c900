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
#include <random>
#include <stdexcept>

#include "ergonull/array_manifold.hpp"
#include "test_support.hpp"

using namespace ergonull;

TEST_CASE("UlaGeometry positions and validation") {
  const UlaGeometry g(5, 0.5);
  CHECK(g.num_elements() == 5);
  CHECK(g.position_wl(3) == doctest::Approx(1.5));
  CHECK(g.aperture_wl() == doctest::Approx(2.0));
  CHECK_THROWS_AS(UlaGeometry(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(UlaGeometry(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(UlaGeometry(3, -1.0), std::invalid_argument);
}

TEST_CASE("Direction is restricted to the open interval and caches its cosine") {
  CHECK_THROWS_AS(static_cast<void>(Direction(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(Direction(kPi)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(Direction(-0.1)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(Direction(std::nan(""))), std::invalid_argument);
  const Direction d(1.0);
  CHECK(d.cosine() == std::cos(1.0));
  CHECK(Direction::from_degrees(60.0).theta() == doctest::Approx(kPi / 3).epsilon(1e-15));
  CHECK(Direction::from_degrees(175.0).degrees() == doctest::Approx(175.0));
}

TEST_CASE("steering_vector examples") {
  const UlaGeometry g(8, 0.5);
  SUBCASE("broadside gives all ones") {
    const auto a = steering_vector(g, Support{0, 1}, Direction(kPi / 2));
    REQUIRE(a.size() == 2);
    CHECK(std::abs(a[0] - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(a[1] - cplx(1, 0)) < 1e-15);
  }
  SUBCASE("60 degrees on adjacent pair gives [1, j]") {
    const auto a = steering_vector(g, Support{0, 1}, Direction(kPi / 3));
    CHECK(std::abs(a[1] - cplx(0, 1)) < 1e-12);
  }
  SUBCASE("single element") {
    const auto a = steering_vector(g, Support{4}, Direction(0.7));
    REQUIRE(a.size() == 1);
    CHECK(a[0] == cplx(1, 0));
  }
  SUBCASE("entries are unit modulus and referenced to the first support index") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      const Direction th = testing::random_direction(rng);
      const auto a = steering_vector(g, Support{2, 3, 7}, th);
      CHECK(a[0] == cplx(1, 0));
      for (const cplx& x : a) CHECK(std::abs(x) == doctest::Approx(1.0).epsilon(1e-14));
      const cplx expect = std::polar(1.0, kTwoPi * 2.5 * th.cosine());
      CHECK(std::abs(a[2] - expect) < 1e-12);
    }
  }
}

TEST_CASE("steering_vector rejects bad supports") {
  const UlaGeometry g(4, 0.5);
  CHECK_THROWS_AS(steering_vector(g, Support{}, Direction(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(steering_vector(g, Support{0, 4}, Direction(1.0)), std::out_of_range);
  CHECK_THROWS_AS(steering_vector(g, Support{2, 1}, Direction(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(steering_vector(g, Support{1, 1}, Direction(1.0)), std::invalid_argument);
}

TEST_CASE("pair_gain examples") {
  CHECK(pair_gain(1.0, Direction(kPi / 2), 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(pair_gain(1.0, Direction(kPi / 3), 0.0)) < 1e-15);
  CHECK(std::abs(pair_gain(0.5, Direction(1e-9), 0.0)) < 1e-12);
}

TEST_CASE("beam_pattern examples") {
  const UlaGeometry g(2, 0.5);
  const std::vector<Direction> broadside{Direction(kPi / 2)};
  const SparseBeamformer sum{{0, 1}, {1.0, 1.0}};
  const SparseBeamformer diff{{0, 1}, {1.0, -1.0}};
  CHECK(beam_pattern(sum, g, broadside)[0] == doctest::Approx(2.0));
  CHECK(std::abs(beam_pattern(diff, g, broadside)[0]) < 1e-15);
  // Unnormalized input is normalized first.
  const SparseBeamformer big{{0, 1}, {3.0, 3.0}};
  CHECK(beam_pattern(big, g, broadside)[0] == doctest::Approx(2.0));
  CHECK_THROWS_AS(beam_pattern(sum, g, std::vector<Direction>{}), std::invalid_argument);
  const SparseBeamformer zero{{0, 1}, {0.0, 0.0}};
  CHECK_THROWS(beam_pattern(zero, g, broadside));
}

TEST_CASE("four-user example: beam gains at 5 wavelengths with a matched or SINR-optimal phase") {
  const UlaGeometry g(51, 0.5);
  const double d = 5.0;
  const std::vector<double> deg{175.0, 59.0, 151.0, 133.0};
  std::vector<Direction> dirs;
  for (double x : deg) dirs.push_back(Direction::from_degrees(x));
  // The SINR-optimal grid phase at 0 dB SNR is 31 degrees (weights [1, e^{j phi}]).
  const SparseBeamformer w{{0, 10}, {1.0, std::polar(1.0, deg_to_rad(31.0))}};
  const auto gains = beam_pattern(w, g, dirs);
  CHECK(gains[0] >= 1.9);
  for (std::size_t k = 1; k < gains.size(); ++k) CHECK(gains[k] <= 0.1);
  // The phase that puts the desired user exactly on the peak.
  const double matched = kTwoPi * d * dirs[0].cosine();
  const SparseBeamformer wm{{0, 10}, {1.0, std::polar(1.0, matched)}};
  CHECK(beam_pattern(wm, g, dirs)[0] == doctest::Approx(2.0));
}

TEST_CASE("SparseBeamformer helpers") {
  const SparseBeamformer w{{0, 3}, {cplx(1, 0), cplx(0, 2)}};
  CHECK(w.norm_squared() == doctest::Approx(5.0));
  CHECK(w.normalized().norm_squared() == doctest::Approx(1.0));
  const std::vector<cplx> a{cplx(1, 0), cplx(0, 1)};
  // w^H a = 1 + conj(2j) * j = 1 + 2
  CHECK(std::abs(w.response(a) - cplx(3, 0)) < 1e-15);
  CHECK_THROWS(w.response(std::vector<cplx>{cplx(1, 0)}));
}

TEST_CASE("degree conversions round-trip") {
  for (double x : {0.1, 45.0, 90.0, 179.9}) CHECK(rad_to_deg(deg_to_rad(x)) == doctest::Approx(x));
}
