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
#include <string>

#include "qwigner/errors.hpp"
#include "qwigner/io.hpp"

using namespace qwigner;
constexpr double kPi = std::numbers::pi;

namespace {
bool has_issue(const ConfigError& e, const std::string& needle) {
  for (const auto& i : e.issues())
    if (i.find(needle) != std::string::npos) return true;
  return false;
}

json minimal() {
  return json::parse(R"({"schema": 1, "state": {"bloch": {"theta": "pi/2", "phi": 0, "r": 1}},
                         "scan": {"points": [[0, "pi/2"]]}})");
}
}  // namespace

TEST_CASE("angle grammar") {
  CHECK(parse_angle("pi") == doctest::Approx(kPi));
  CHECK(parse_angle("-pi/2") == doctest::Approx(-kPi / 2));
  CHECK(parse_angle("0.509pi") == doctest::Approx(0.509 * kPi));
  CHECK(parse_angle("3pi/4") == doctest::Approx(0.75 * kPi));
  CHECK(parse_angle("2*pi") == doctest::Approx(2 * kPi));
  CHECK(parse_angle(" 1.25 ") == 1.25);
  CHECK(parse_angle("PI") == doctest::Approx(kPi));
  for (const char* bad : {"", "pi/0", "xpi", "pipi", "pi*2", "1..2", "nan", "pi/"})
    CHECK_THROWS_AS(parse_angle(bad), DomainError);
  CHECK(angle_from_json(json("pi/2")) == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(angle_from_json(json::array()), DomainError);
}

TEST_CASE("numbers print with 17 significant digits and round-trip") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, kPi}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("state documents") {
  const auto a = state_from_json(json::parse(R"({"bloch": {"theta": "pi/2", "phi": 0, "r": 0.5}})"));
  CHECK(a(0, 1).real() == doctest::Approx(0.25));
  const auto b = state_from_json(json::parse(R"({"matrix": {"re": [[0.486, -0.033], [-0.033, 0.514]],
                                                             "im": [[0, -0.489], [0.489, 0]]}})"));
  CHECK(b(0, 1).imag() == doctest::Approx(-0.489));
  CHECK_THROWS_AS(state_from_json(json::parse(R"({"bloch": {"r": 2}})")), DomainError);
  CHECK_THROWS_AS(state_from_json(json::parse(R"({"bloch": {"r": 1, "psi": 0}})")), DomainError);
  CHECK_THROWS_AS(state_from_json(json::parse(R"({"matrix": {"re": [[0.5, 0.6], [0.6, 0.5]], "im": [[0, 0], [0, 0]]}})")),
                  DomainError);
  const auto round = density_from_json(to_json(b));
  CHECK(round(0, 1) == b(0, 1));
}

TEST_CASE("channel documents") {
  const auto c = channel_from_json(json::parse(R"({"kernel": "table", "points": [[0, 1], [2, 0.8]]})"));
  CHECK(c.kernel == DecayKernel::Table);
  CHECK(channel_from_json(to_json(c)).table == c.table);
  CHECK(channel_from_json(json::parse(R"({"t2_ms": 5})")).t2_ms == 5.0);
  CHECK_THROWS_AS(channel_from_json(json::parse(R"({"kernel": "table"})")), DomainError);
}

TEST_CASE("axes") {
  CHECK(axis_from_json(json::parse(R"([0, "pi"])"), "a").size() == 2);
  const auto r = axis_from_json(json::parse(R"({"from": 0, "to": "2pi", "n": 4, "endpoint": false})"), "a");
  REQUIRE(r.size() == 4);
  CHECK(r[3] == doctest::Approx(1.5 * kPi));
  const auto inc = axis_from_json(json::parse(R"({"from": 0, "to": 1, "n": 3})"), "a");
  CHECK(inc.back() == 1.0);
  CHECK_THROWS_AS(axis_from_json(json::parse(R"({"from": 0, "to": 1, "n": 0})"), "a"), DomainError);
  CHECK_THROWS_AS(axis_from_json(json::parse(R"({"from": 0, "to": 1, "m": 3})"), "a"), DomainError);
}

TEST_CASE("minimal experiment parses with defaults") {
  const auto cfg = parse_experiment(minimal());
  REQUIRE(cfg.campaign);
  CHECK(cfg.campaign->shots == 300);
  CHECK(cfg.campaign->scan.points.size() == 1);
  CHECK(cfg.campaign->scan.points[0].chi == doctest::Approx(kPi / 2));
  CHECK_FALSE(cfg.ramsey);
}

TEST_CASE("unknown fields and bad values are all reported with their paths") {
  auto doc = minimal();
  doc["colour"] = "blue";
  doc["shots"] = -3;
  doc["detection"] = json::parse(R"({"eps0": 2, "typo": 1})");
  doc["scan"]["repeats"] = 0;
  try {
    parse_experiment(doc);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has_issue(e, "config.colour"));
    CHECK(has_issue(e, "config.shots"));
    CHECK(has_issue(e, "detection.typo"));
    CHECK(has_issue(e, "eps0"));
  }
}

TEST_CASE("schema version is required") {
  auto doc = minimal();
  doc.erase("schema");
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);
  doc["schema"] = 2;
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);
}

TEST_CASE("scan needs exactly one of points or grid") {
  auto doc = minimal();
  doc["scan"]["grid"] = json::parse(R"({"xi": [0], "chi": [0]})");
  CHECK_THROWS_AS(parse_experiment(doc), ConfigError);
  doc["scan"].erase("points");
  const auto cfg = parse_experiment(doc);
  CHECK(cfg.campaign->scan.points.size() == 1);
}

TEST_CASE("bundled configs parse") {
  for (const char* name : {"fig3.json", "fig4.json", "ramsey.json", "table1.json"}) {
    CAPTURE(name);
    CHECK_NOTHROW(load_experiment(std::string(QWIGNER_CONFIG_DIR) + "/" + name));
  }
  const auto fig4 = load_experiment(std::string(QWIGNER_CONFIG_DIR) + "/fig4.json");
  REQUIRE(fig4.campaign);
  CHECK(fig4.campaign->fit_wmin);
  CHECK(fig4.campaign->tomography.enabled);
  CHECK(fig4.campaign->scan.points.size() == 36);
}

TEST_CASE("missing and malformed files") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/config.json"), IoError);
}

TEST_CASE("grid CSV layout") {
  const auto g = wigner_grid(DensityMatrixd::maximally_mixed(), 3, 2, Spand{0, kPi}, Spand{0, 2 * kPi});
  std::ostringstream os;
  write_grid_csv(os, g);
  const std::string s = os.str();
  CHECK(s.rfind("xi,chi,w\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 7);
  const auto j = grid_to_json(g, json{{"note", "x"}});
  CHECK(j["values"].size() == 3);
  CHECK(j["metadata"]["note"] == "x");
}

TEST_CASE("tally CSV import") {
  std::istringstream good(
      "basis,t_ms,xi,chi,n_retained,n_lost\n"
      "# comment\n"
      "x,0,0,0,150,150\ny,0,0,0,30,270\nz,0,0,0,240,60\n"
      "w,0,pi/2,pi/2,10,290\n");
  const auto records = read_tally_csv(good);
  CHECK(records.size() == 4);
  CHECK(records[3].chi == doctest::Approx(kPi / 2));
  const auto grouped = group_pauli_tallies(records);
  REQUIRE(grouped.size() == 1);
  CHECK(grouped[0].second.y.n_minus == 270);

  std::istringstream bad("basis,t_ms,xi,chi,n_retained,n_lost\nx,0,0,0,150,150\nq,0,0,0,1,1\n");
  try {
    read_tally_csv(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream neg("basis,t_ms,xi,chi,n_retained,n_lost\nx,0,0,0,-1,5\n");
  CHECK_THROWS_AS(read_tally_csv(neg), ConfigError);
  std::istringstream noheader("x,0,0,0,1,1\n");
  CHECK_THROWS_AS(read_tally_csv(noheader), ConfigError);
  std::istringstream partial("basis,t_ms,xi,chi,n_retained,n_lost\nx,0,0,0,1,1\n");
  CHECK_THROWS_AS(group_pauli_tallies(read_tally_csv(partial)), ConfigError);
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
