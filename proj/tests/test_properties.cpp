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

#include "ergonull/ergodic_nulling.hpp"
#include "ergonull/mimo_selection.hpp"
#include "ergonull/rates.hpp"
#include "test_support.hpp"

using namespace ergonull;

TEST_CASE("pair gain: range, periodicity and agreement with the beam pattern") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int rep = 0; rep < 500; ++rep) {
    const Direction th = testing::random_direction(rng);
    const double d = std::abs(u(rng));
    const double phi = u(rng);
    const double g = pair_gain(d, th, phi);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
    CHECK(pair_gain(d, th, phi + kTwoPi) == doctest::Approx(g).epsilon(1e-9));
    // Mirroring the direction and the phase leaves the gain unchanged.
    CHECK(pair_gain(d, Direction(kPi - th.theta()), -phi) == doctest::Approx(g).epsilon(1e-9));
  }
  // |w^H a|^2 with w = [1, e^{j phi}] / sqrt(2) on two elements d apart.
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t sep = 1 + static_cast<std::size_t>(rep % 30);
    const UlaGeometry g(sep + 1, 0.5);
    const Direction th = testing::random_direction(rng);
    const double phi = u(rng);
    const SparseBeamformer w{{0, sep}, {1.0, std::polar(1.0, phi)}};
    const double beam = beam_pattern(w, g, std::vector<Direction>{th})[0];
    CHECK(std::abs(beam - 2.0 * pair_gain(0.5 * static_cast<double>(sep), th, -phi)) < 1e-12);
  }
}

TEST_CASE("beam pattern never exceeds the support size") {
  std::mt19937_64 rng(2);
  const UlaGeometry g(40, 0.5);
  for (int rep = 0; rep < 100; ++rep) {
    const SparseBeamformer w{{0, 5, 17, 39},
                             {testing::random_gaussian(rng), testing::random_gaussian(rng),
                              testing::random_gaussian(rng), testing::random_gaussian(rng)}};
    for (double v : beam_pattern(w, g, testing::random_directions(rng, 20))) CHECK(v <= 4.0 + 1e-12);
  }
}

TEST_CASE("selection composes with the identity") {
  const SelectionMatrix s{{1, 4, 7}};
  CHECK(s.then(SelectionMatrix::identity(3)).indices == s.indices);
  CHECK(SelectionMatrix::identity(10).then(s).indices == s.indices);
}

TEST_CASE("MIMO channel matrix is linear in each path gain") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<PathList> at0(1);
    const cplx g1 = testing::random_gaussian(rng);
    const cplx g2 = testing::random_gaussian(rng);
    const cplx a = testing::random_gaussian(rng);
    const double th1 = testing::random_direction(rng).theta();
    const double th2 = testing::random_direction(rng).theta();
    auto build = [&](cplx x) {
      std::vector<PathList> p(1);
      p[0] = {testing::path(x, th1, 1.0), testing::path(g2, th2, 2.0)};
      const MimoScenario s = testing::mimo(2, 8, p, {1.0});
      return mimo_channel_matrix(s, 0, 0, SelectionMatrix{{0, 3, 5}}, SelectionMatrix::identity(2));
    };
    const CMatrix h0 = build(0.0);
    const CMatrix lhs = build(a * g1 + g1) - h0;
    const CMatrix rhs = (a + 1.0) * (build(g1) - h0);
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("residual interference stays below delta times interferer energy") {
  std::mt19937_64 rng(4);
  const UlaGeometry g(200, 0.5);
  int checked = 0;
  for (int rep = 0; rep < 300; ++rep) {
    MultipathScenario s;
    s.num_users = 3;
    s.paths.assign(3, std::vector<PathList>(3));
    s.power = {1.0, 2.0, 0.5};
    double energy = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
      for (int l = 0; l < 2; ++l) {
        PathSpec p;
        p.gain = testing::random_gaussian(rng);
        p.doa = testing::random_direction(rng);
        p.dod = Direction(1.0);
        s.paths[0][j].push_back(p);
        if (j != 0) energy += s.power[j] * std::norm(p.gain);
      }
    std::uniform_int_distribution<std::size_t> pick(1, 199);
    const SparseBeamformer w{{0, pick(rng)}, {1.0, testing::random_unit_phase(rng)}};
    const SparseBeamformer wn = w.normalized();
    double max_gain = 0.0;
    for (std::size_t j = 1; j < 3; ++j)
      for (const PathSpec& p : s.paths[0][j])
        max_gain = std::max(max_gain, beam_pattern(wn, g, std::vector<Direction>{p.doa})[0]);
    const double delta = std::nextafter(max_gain, 10.0);
    CHECK(residual_interference_power(s, 0, wn, g) < delta * energy);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("Weyl search success is monotone in d_max") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> c;
    for (const Direction& d : testing::random_directions(rng, 3)) c.push_back(d.cosine());
    const auto at_big = weyl_box_search(c, 0, 0.6, 20000);
    for (std::uint64_t dm : {10ULL, 100ULL, 1000ULL, 5000ULL, 20000ULL, 80000ULL}) {
      const auto r = weyl_box_search(c, 0, 0.6, dm);
      if (r) {
        CHECK(weyl_box_search(c, 0, 0.6, dm * 4) == r);
      }
      if (at_big && dm >= 20000) CHECK(r == at_big);
    }
  }
}

TEST_CASE("Weyl box hit fraction converges to the box volume") {
  std::mt19937_64 rng(6);
  const std::uint64_t m = 100000;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> c;
    for (const Direction& d : testing::random_directions(rng, 2)) c.push_back(d.cosine());
    const BoxSpec b = BoxSpec::nulling_box(2, 0, 0.2 * kTwoPi);
    // Shift the desired interval off the wrap-around so the box is a plain product.
    std::vector<std::pair<double, double>> box = b.intervals;
    box[0] = {0.3, 0.5};
    const double vol = (box[0].second - box[0].first) * (box[1].second - box[1].first);
    const double frac = box_hit_fraction(c, box, m);
    const double sd = std::sqrt(vol * (1.0 - vol) / static_cast<double>(m));
    CHECK(std::abs(frac - vol) < 3.0 * sd);
  }
}

TEST_CASE("closed-form pair weights dominate the phase grid on every pair") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const auto dirs = testing::random_directions(rng, 4);
    const LosScenario s = testing::los(dirs, {1.0, 2.0, 0.7, 1.3}, 0.4);
    const UlaGeometry pair(2, 0.5 * static_cast<double>(1 + rep % 25));
    PairSearchOptions grid;
    grid.mode = PairMode::kPhaseGrid;
    PairSearchOptions closed;
    closed.mode = PairMode::kClosedForm;
    CHECK(pair_selection_search(s, 0, pair, closed).achieved_sinr >=
          pair_selection_search(s, 0, pair, grid).achieved_sinr * (1.0 - 1e-12));
  }
}

TEST_CASE("MVDR SINR is invariant to a common power and noise scale") {
  std::mt19937_64 rng(8);
  const UlaGeometry g(30, 0.5);
  const SelectionMatrix sup{{0, 7, 22}};
  for (int rep = 0; rep < 20; ++rep) {
    const auto dirs = testing::random_directions(rng, 3);
    const auto ad = steering_vector(g, sup.indices, dirs[0]);
    const std::vector<SteeringVector> ai{steering_vector(g, sup.indices, dirs[1]),
                                         steering_vector(g, sup.indices, dirs[2])};
    const std::vector<double> p{0.5, 3.0};
    const std::vector<double> p_scaled{0.5 * 1e3, 3.0 * 1e3};
    const SparseBeamformer w1 = support_constrained_mvdr(ad, ai, p, 0.2, sup);
    const SparseBeamformer w2 = support_constrained_mvdr(ad, ai, p_scaled, 0.2 * 1e3, sup);
    const double s1 = output_sinr(w1.weights, ad, 1.0, ai, p, 0.2);
    const double s2 = output_sinr(w2.weights, ad, 1e3, ai, p_scaled, 0.2 * 1e3);
    CHECK(s2 == doctest::Approx(s1).epsilon(1e-9));
  }
}

TEST_CASE("rates: nonnegative, monotone in SNR, interference only hurts, unitary invariance") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    const CMatrix hd = testing::random_matrix(rng, 3, 2);
    const std::vector<CMatrix> hi{testing::random_matrix(rng, 3, 1), testing::random_matrix(rng, 3, 2)};
    double prev = -1.0;
    for (double p : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double r = mimo_rate_interference_as_noise(hd, hi, p, 0.5);
      CHECK(r >= 0.0);
      CHECK(r >= prev - 1e-12);
      CHECK(r <= mimo_rate_interference_as_noise(hd, {}, p, 0.5) + 1e-12);
      prev = r;
    }
    const CMatrix u = testing::random_unitary(rng, 3);
    std::vector<CMatrix> uhi;
    for (const CMatrix& h : hi) uhi.push_back(u * h);
    CHECK(mimo_rate_interference_as_noise(u * hd, uhi, 2.0, 0.5) ==
          doctest::Approx(mimo_rate_interference_as_noise(hd, hi, 2.0, 0.5)).epsilon(1e-10));
    // log2 det(I + A A^H) = log2 det(I + A^H A)
    CHECK(log2_det_hpd(CMatrix::Identity(3, 3) + hd * hd.adjoint()) ==
          doctest::Approx(log2_det_hpd(CMatrix::Identity(2, 2) + hd.adjoint() * hd)).epsilon(1e-10));
  }
  const UlaGeometry g(20, 0.5);
  for (int rep = 0; rep < 30; ++rep) {
    const auto dirs = testing::random_directions(rng, 4);
    double prev = -1.0;
    for (double snr : {0.1, 1.0, 10.0, 100.0}) {
      const LosScenario s = testing::los(dirs, {snr, snr, snr, snr});
      const SparseBeamformer w = pair_selection_search(s, 0, g).beamformer;
      const double r = LinkRate::from_sinr(sinr(s, 0, w, g)).bits_per_use;
      CHECK(r >= prev - 1e-12);
      CHECK(r <= interference_free_rate(s, 0, SelectionMatrix{w.support}) + 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("waterfilling: trace, PSD and dominance over isotropic input") {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 30; ++rep) {
    CMatrix gm = CMatrix::Zero(2, 2);
    gm(0, 0) = testing::random_gaussian(rng);
    gm(1, 1) = testing::random_gaussian(rng);
    const CMatrix at = testing::random_matrix(rng, 2, 2);
    const double p = 0.1 + 10.0 * std::norm(testing::random_gaussian(rng));
    const WaterfillingResult w = csit_rate_waterfilling(gm * at, p, 1.0);
    CHECK(w.covariance.trace().real() == doctest::Approx(p).epsilon(1e-9));
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(w.covariance);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * p);
    CHECK((w.covariance - w.covariance.adjoint()).norm() < 1e-12 * p);
    CHECK(w.rate >= theorem2_rate(gm, at, p, 1.0, 2) - 1e-12);
  }
}

TEST_CASE("equivalent-channel deviation shrinks as the array grows") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, kPi - 0.05);
  const int seeds = 12;
  std::vector<double> mean_d;
  for (std::size_t n : {50U, 250U, 1000U}) {
    std::mt19937_64 local(11);
    double sum = 0.0;
    for (int rep = 0; rep < seeds; ++rep) {
      std::vector<PathList> at0(3);
      at0[0] = {testing::path(1.0, u(local), u(local)), testing::path(1.0, u(local), u(local))};
      at0[1] = {testing::path(1.0, u(local), u(local))};
      at0[2] = {testing::path(1.0, u(local), u(local))};
      const MimoScenario s = testing::mimo(2, n, at0, {10.0, 10.0, 10.0});
      const StreamAssignment a = per_stream_pair_search(s, 0);
      sum += assemble_equivalent_channel(a, s, 0).deviation_max_abs;
    }
    mean_d.push_back(sum / seeds);
  }
  CHECK(mean_d[1] < mean_d[0]);
  CHECK(mean_d[2] < mean_d[1]);
}

TEST_CASE("exactly nullable instance: the equivalent-channel rate equals the ideal rate") {
  std::vector<PathList> at0(1);
  at0[0] = {testing::path(1.0, kPi / 2, 1.0), testing::path(cplx(0.0, 0.9), kPi / 3, 2.0)};
  const MimoScenario s = testing::mimo(2, 4, at0, {5.0});
  StreamAssignment a;
  a.antennas = {2, 1};
  a.beamformers = {SparseBeamformer{{0, 2}, {1.0, 1.0}}, SparseBeamformer{{0, 2}, {1.0, -1.0}}};
  const EquivalentChannel eq = assemble_equivalent_channel(a, s, 0);
  REQUIRE(eq.deviation_max_abs < 1e-12);
  const PathFactors f = desired_path_factors(s, 0);
  const double ideal = theorem2_rate(f.g, f.a_t, 5.0, 1.0, 2);
  CHECK(mimo_rate_interference_as_noise(eq.h_tilde, {}, 5.0 / 2.0, 1.0) == doctest::Approx(ideal).epsilon(1e-12));
}

TEST_CASE("three users, two streams each, large array: rank-2 equivalent channel with suppressed interference") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.1, kPi - 0.1);
  int rank_two = 0;
  const int reps = 10;
  for (int rep = 0; rep < reps; ++rep) {
    MimoScenario s;
    s.num_users = 3;
    s.streams = 2;
    s.rx_chains = 3;
    s.tx_geometry = UlaGeometry(2, 0.5);
    s.rx_geometry = UlaGeometry(20000, 0.5);
    s.paths.assign(3, std::vector<PathList>(3));
    for (std::size_t j = 0; j < 3; ++j)
      s.paths[0][j] = {testing::path(1.0, u(rng), u(rng)), testing::path(0.9, u(rng), u(rng))};
    s.power = {1e3, 1e3, 1e3};
    s.tx_streams = {2, 2, 2};
    s.validate();
    const StreamAssignment a = per_stream_pair_search(s, 0);
    const EquivalentChannel eq = assemble_equivalent_channel(a, s, 0);
    Eigen::JacobiSVD<CMatrix> svd(eq.h_tilde);
    if (svd.singularValues()(1) > 1e-6 * svd.singularValues()(0)) ++rank_two;
    // Interference through the normalized combiner, relative to the desired gain of 1 per path.
    double residual = 0.0;
    for (std::size_t j = 1; j < 3; ++j)
      for (const PathSpec& p : s.paths[0][j]) {
        const auto ar = steering_vector(s.rx_geometry, a.support().indices, p.doa);
        for (Eigen::Index l = 0; l < 2; ++l) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < ar.size(); ++k) acc += std::conj(eq.w(static_cast<Eigen::Index>(k), l)) * ar[k];
          residual = std::max(residual, std::norm(acc) * std::norm(p.gain));
        }
      }
    CHECK(residual < 0.1);
  }
  CHECK(rank_two == reps);
}
