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
#include "qwigner/dephasing.hpp"
#include "qwigner/errors.hpp"
#include "qwigner/random.hpp"

using namespace qwigner;
using oracle::kPi;

namespace {
DensityMatrixd random_rho(std::mt19937_64& gen) {
  const auto s = oracle::random_state(gen);
  return density_from_bloch(BlochStated{s.theta, s.phi, s.r});
}
}  // namespace

TEST_CASE("decay kernels") {
  const auto e = ChannelParams::exponential(17.2);
  const auto g = ChannelParams::gaussian(17.2);
  CHECK(decay_factor(0.0, e) == 1.0);
  CHECK(decay_factor(17.2, e) == doctest::Approx(std::exp(-1.0)));
  CHECK(decay_factor(8.6, g) == doctest::Approx(std::exp(-0.25)));
  CHECK_THROWS_AS(decay_factor(-1.0, e), DomainError);
  CHECK(to_string(DecayKernel::Gaussian) == "gaussian");
  CHECK(decay_kernel_from_string("table") == DecayKernel::Table);
  CHECK_THROWS_AS(decay_kernel_from_string("lorentzian"), DomainError);
}

TEST_CASE("table kernel interpolates and holds the last value") {
  const auto t = ChannelParams::calibrated({{0, 1.0}, {2, 0.8}, {6, 0.4}});
  CHECK(decay_factor(1.0, t) == doctest::Approx(0.9));
  CHECK(decay_factor(4.0, t) == doctest::Approx(0.6));
  CHECK(decay_factor(6.0, t) == doctest::Approx(0.4));
  CHECK(decay_factor(60.0, t) == doctest::Approx(0.4));
  CHECK_THROWS_AS(ChannelParams::calibrated({{1, 1.0}, {2, 0.8}}), DomainError);
  CHECK_THROWS_AS(ChannelParams::calibrated({{0, 1.0}, {2, 0.8}, {2, 0.7}}), DomainError);
  CHECK_THROWS_AS(ChannelParams::calibrated({{0, 1.0}, {2, 1.3}}), DomainError);
}

TEST_CASE("channel parameters are validated") {
  CHECK_THROWS_AS(ChannelParams::exponential(0.0), DomainError);
  CHECK_THROWS_AS(ChannelParams::exponential(10.0, 1.5), DomainError);
}

TEST_CASE("dephasing keeps populations and damps coherences") {
  std::mt19937_64 gen(31);
  const auto ch = ChannelParams::exponential(17.2);
  for (int i = 0; i < 200; ++i) {
    const auto rho = random_rho(gen);
    const auto out = dephase(rho, 5.0, ch);
    CHECK(out(0, 0).real() == doctest::Approx(rho(0, 0).real()).epsilon(1e-14));
    CHECK(std::abs(out(0, 1) - rho(0, 1) * std::exp(-5.0 / 17.2)) < 1e-14);
    CHECK(out.determinant() >= -1e-14);
  }
}

TEST_CASE("exponential dephasing composes; gaussian does not") {
  std::mt19937_64 gen(32);
  const auto rho = random_rho(gen);
  const auto e = ChannelParams::exponential(10.0);
  CHECK(std::abs(dephase(dephase(rho, 2.0, e), 3.0, e)(0, 1) - dephase(rho, 5.0, e)(0, 1)) < 1e-14);
  const auto g = ChannelParams::gaussian(10.0);
  CHECK(std::abs(dephase(dephase(rho, 2.0, g), 3.0, g)(0, 1) - dephase(rho, 5.0, g)(0, 1)) > 1e-6);
}

TEST_CASE("r_of_t holds on the equator only") {
  const auto ch = ChannelParams::exponential(17.2, 0.981);
  CHECK(r_of_t(17.2, ch, kPi / 2) == doctest::Approx(0.981 * std::exp(-1.0)));
  CHECK_THROWS_AS(r_of_t(1.0, ch, kPi / 4), OffAxisWarning);
  // Matches the Bloch radius of an equatorial state.
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 1.0, 0.981});
  CHECK(bloch_from_density(dephase(rho, 4.0, ch)).r == doctest::Approx(r_of_t(4.0, ch, kPi / 2)));
}

TEST_CASE("phase_shift advances the azimuth") {
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 0.5, 0.9});
  const auto out = bloch_from_density(phase_shift(rho, 0.3));
  CHECK(out.phi == doctest::Approx(0.8));
  CHECK(out.r == doctest::Approx(0.9));
}

TEST_CASE("jitter model") {
  const auto ch = ChannelParams::exponential(17.2);
  const auto j = JitterModel::matched(ch);
  CHECK(j.sigma(0.0) == 0.0);
  CHECK(j.sigma(17.2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(JitterModel::none().sigma(5.0) == 0.0);
  CHECK_THROWS_AS(JitterModel([](double) { return 0.1; }), DomainError);
}

TEST_CASE("jitter realizations average to the deterministic channel") {
  const auto ch = ChannelParams::exponential(17.2);
  const auto j = JitterModel::matched(ch);
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 0.0, 1.0});
  RandomStream rng(5);
  const int n = 20000;
  double sum_re = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_dephased_state(rho, 10.0, j, rng)(0, 1).real();
    sum_re += x;
    sum_sq += x * x;
  }
  const double mean = sum_re / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  CHECK(std::abs(mean - dephase(rho, 10.0, ch)(0, 1).real()) < 4 * se);
}
