// Copyright 2026 The qwigner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qwigner/errors.hpp"
#include "qwigner/shots.hpp"

using namespace qwigner;
using oracle::kPi;

TEST_CASE("pulse durations") {
  PulseParams p;
  p.detuning = 2.0;
  p.rabi_freq = 4.0;
  CHECK(duration_for_z(1.0, p) == doctest::Approx(0.5));
  CHECK(duration_for_z(2 * kPi + 1.0, p) == doctest::Approx(0.5));
  CHECK(duration_for_x(2.0, p) == doctest::Approx(0.5));
  p.detuning = 0.0;
  CHECK_THROWS_AS(duration_for_z(1.0, p), DomainError);
  PulseParams defaults;
  CHECK(duration_for_z(2 * kPi - 1e-9, defaults) + duration_for_x(2 * kPi, defaults) < 1.0);
}

TEST_CASE("pulse and detection parameters are validated") {
  PulseParams p;
  p.rabi_freq = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  DetectionModel d;
  d.contrast = 0.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d.contrast = 1.0;
  d.eps0 = 1.5;
  CHECK_THROWS_AS(d.validate(), DomainError);
}

TEST_CASE("detection distortion and its inverse") {
  DetectionModel d;
  d.eps0 = 0.05;
  d.eps1 = 0.02;
  CHECK(d.retained_probability(1.0) == doctest::Approx(0.95));
  CHECK(d.retained_probability(0.0) == doctest::Approx(0.02));
  CHECK(d.ideal_p0(d.retained_probability(0.37)) == doctest::Approx(0.37));
}

TEST_CASE("a degraded pi pulse flops with amplitude C") {
  DensityMatrixd ground;  // |0><0|
  for (double c : {1.0, 0.9, 0.5}) {
    const auto out = apply_pulse(ground, rotation_x(kPi), c);
    CHECK(out(1, 1).real() == doctest::Approx(c));
  }
}

TEST_CASE("ideal measurement rotation reproduces the Wigner populations") {
  std::mt19937_64 gen(41);
  for (int i = 0; i < 50; ++i) {
    const auto s = oracle::random_state(gen);
    const PhasePointd p{oracle::random_angle(gen), oracle::random_angle(gen)};
    const auto rho = density_from_bloch(BlochStated{s.theta, s.phi, s.r});
    const auto out = rotate_for_measurement(rho, p, DetectionModel{}, ContrastMode::Off);
    const double p0 = out(0, 0).real();
    const double w = (1 - std::sqrt(3.0) * (2 * p0 - 1)) / (2 * kPi * kPi);
    CHECK(w == doctest::Approx(oracle::wigner(s, p.xi, p.chi)).epsilon(1e-12));
  }
}

TEST_CASE("contrast only matters when switched on") {
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 0.0, 1.0});
  DetectionModel d;
  d.contrast = 0.8;
  const PhasePointd p{0.3, 1.2};
  const auto off = rotate_for_measurement(rho, p, d, ContrastMode::Off);
  const auto on = rotate_for_measurement(rho, p, d, ContrastMode::On);
  CHECK(std::abs(off(0, 0).real() - on(0, 0).real()) > 1e-3);
  d.contrast = 1.0;
  CHECK(rotate_for_measurement(rho, p, d, ContrastMode::On)(0, 0).real() == doctest::Approx(off(0, 0).real()));
}

TEST_CASE("shot tallies and the Wigner estimator") {
  ShotTally t{150, 150, {}};
  const auto e = estimate_wigner_from_tally(t);
  CHECK(e.value == doctest::Approx(1 / (2 * kPi * kPi)));
  CHECK(e.std_error == doctest::Approx(std::sqrt(3.0) / (kPi * kPi) * std::sqrt(0.25 / 300)));
  CHECK_THROWS_AS(estimate_wigner_from_tally(ShotTally{}), DomainError);
}

TEST_CASE("simulated point estimates are unbiased") {
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 0.0, 1.0});
  const PhasePointd p{0.7, 1.1};
  RandomStream rng(8);
  const auto e = run_wigner_point(rho, p, 200000, DetectionModel{}, ContrastMode::Off, rng);
  CHECK(std::abs(e.value - oracle::wigner({kPi / 2, 0, 1}, p.xi, p.chi)) < 4 * e.std_error);
  CHECK(e.tally.total() == 200000);
  CHECK_THROWS_AS(run_wigner_point(rho, p, 0, DetectionModel{}, ContrastMode::Off, rng), DomainError);
}

TEST_CASE("preparation and detection errors shift the retained fraction") {
  DensityMatrixd ground;
  DetectionModel d;
  d.eps0 = 0.1;
  RandomStream rng(9);
  const auto t = measure_shots(ground, 100000, d, rng);
  CHECK(std::abs(t.p0_hat() - 0.9) < 0.005);
}

TEST_CASE("ideal Ramsey survival follows (1 + f cos(Delta t)) / 2") {
  PulseParams p;
  p.detuning = 2 * kPi * 0.24;
  const auto ch = ChannelParams::exponential(17.2);
  CHECK(ramsey_expectation(0.0, p, ch, DetectionModel{}) == doctest::Approx(1.0));
  for (double t : {0.5, 3.0, 7.7, 20.0}) {
    const double expected = 0.5 * (1 + std::exp(-t / 17.2) * std::cos(p.detuning * t));
    CHECK(ramsey_expectation(t, p, ch, DetectionModel{}) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("Ramsey contrast scales the fringe") {
  PulseParams p;
  p.detuning = 1.0;
  const auto ch = ChannelParams::exponential(1e9);
  DetectionModel d;
  d.contrast = 0.9;
  const double hi = ramsey_expectation(0.0, p, ch, d);
  const double lo = ramsey_expectation(kPi, p, ch, d);
  CHECK(hi - lo < 0.999);
  CHECK(hi >= 0.9 - 1e-12);
}

TEST_CASE("Ramsey sequence counts") {
  PulseParams p;
  RandomStream rng(4);
  const auto s = ramsey_sequence(0.0, p, ChannelParams::exponential(17.2), DetectionModel{}, 100, rng);
  CHECK(s.n_retained == 100);
  CHECK(s.p_hat == 1.0);
  CHECK(s.std_error == 0.0);
  CHECK_THROWS_AS(ramsey_sequence(-1.0, p, ChannelParams{}, DetectionModel{}, 10, rng), DomainError);
}
