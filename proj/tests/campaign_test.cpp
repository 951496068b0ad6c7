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
#include <numbers>
#include <sstream>

#include "qwigner/campaign.hpp"
#include "qwigner/errors.hpp"
#include "qwigner/io.hpp"

using namespace qwigner;
constexpr double kPi = std::numbers::pi;

namespace {
CampaignConfig small_campaign() {
  CampaignConfig c;
  c.initial = density_from_bloch(BlochStated{kPi / 2, 0.3, 0.98});
  c.channel = ChannelParams::exponential(17.2);
  c.scan.times_ms = {0.0, 5.0};
  for (int k = 0; k < 8; ++k) c.scan.points.push_back({k * kPi / 4, kPi / 2});
  c.scan.repeats = 3;
  c.shots = 200;
  c.seed = 99;
  return c;
}

std::string csv(const CampaignResult& r) {
  std::ostringstream os;
  write_campaign_csv(os, r);
  return os.str();
}
}  // namespace

TEST_CASE("validation lists every problem") {
  CampaignConfig c;
  c.shots = 0;
  c.scan.times_ms = {-1.0};
  c.scan.repeats = 0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues().size() >= 4);
  }
}

TEST_CASE("campaign output does not depend on the thread count") {
  const auto c = small_campaign();
  CHECK(csv(run_campaign(c, 1)) == csv(run_campaign(c, 4)));
}

TEST_CASE("every evolution mode is reproducible") {
  for (auto mode : {EvolutionMode::Ensemble, EvolutionMode::JitterPerShot, EvolutionMode::JitterPerPoint}) {
    auto c = small_campaign();
    c.evolution = mode;
    CHECK(csv(run_campaign(c, 1)) == csv(run_campaign(c, 3)));
  }
}

TEST_CASE("a different seed gives different counts") {
  auto c = small_campaign();
  const auto a = csv(run_campaign(c));
  c.seed = 100;
  CHECK(a != csv(run_campaign(c)));
}

TEST_CASE("rows carry the ideal value and summaries the model radius") {
  const auto c = small_campaign();
  const auto r = run_campaign(c);
  REQUIRE(r.rows.size() == 2 * 3 * 8);
  const auto& row = r.rows[8 * 3 + 2];  // t = 5, repeat 0, point 2
  CHECK(row.t_ms == 5.0);
  CHECK(row.w_theory == doctest::Approx(wigner_value(dephase(c.initial, 5.0, c.channel), c.scan.points[2])));
  REQUIRE(r.summaries.size() == 2);
  CHECK(r.summaries[1].r_model == doctest::Approx(0.98 * std::exp(-5.0 / 17.2)));
  CHECK(r.summaries[1].w_min_per_repeat.size() == 3);
  CHECK(r.summaries[1].w_min_error > 0.0);
  CHECK_FALSE(r.wmin_fit);
}

TEST_CASE("tomography and the W_min fit run when requested") {
  auto c = small_campaign();
  c.tomography.enabled = true;
  c.fit_wmin = true;
  const auto r = run_campaign(c, 2);
  REQUIRE(r.summaries[0].r_tomography_mean);
  CHECK(std::abs(*r.summaries[0].r_tomography_mean - 0.98) < 0.1);
  REQUIRE(r.wmin_fit);
  CHECK(r.wmin_fit->value("slope") < 0.0);
}

TEST_CASE("failed preparation leaves the excited state") {
  DetectionModel d;
  d.prep_fidelity = 0.9;
  const auto rho = prepared_state(density_from_bloch(BlochStated{0, 0, 1}), d);
  CHECK(rho(0, 0).real() == doctest::Approx(0.9));
  CHECK(rho(1, 1).real() == doctest::Approx(0.1));
}

TEST_CASE("rotation time counts as evolution when enabled") {
  PulseParams p;
  CHECK(effective_time(2.0, PhasePointd{kPi, 0}, p) == 2.0);
  p.dephase_during_rotation = true;
  p.z_rotation_overhead = 0.1;
  CHECK(effective_time(2.0, PhasePointd{kPi, 0}, p) == doctest::Approx(2.0 + 0.1 + kPi / p.detuning));
}

TEST_CASE("Ramsey weights stay finite for saturated delays") {
  std::vector<SurvivalEstimate> pts{{0.0, 100, 0, 1.0, 0.0}, {1.0, 50, 50, 0.5, 0.05}};
  const auto s = ramsey_samples(pts);
  CHECK(std::isfinite(s[0].weight));
  CHECK(s[0].weight > s[1].weight);
}

TEST_CASE("Ramsey scan and fit") {
  RamseyConfig rc;
  rc.pulses.detuning = 2 * kPi * 0.24;
  rc.channel = ChannelParams::exponential(17.2);
  for (int k = 0; k < 25; ++k) rc.delays_ms.push_back(k * 25.0 / 24);
  rc.shots = 2000;
  rc.seed = 3;
  const auto r = run_ramsey(rc, 2);
  REQUIRE(r.fit);
  CHECK(std::abs(r.fit->value("T") - 17.2) < 3 * r.fit->std_error("T"));
  CHECK(r.expectation[0] == doctest::Approx(1.0));
  rc.delays_ms.clear();
  CHECK_THROWS_AS(run_ramsey(rc), ConfigError);
}
