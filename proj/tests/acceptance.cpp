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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qwigner/campaign.hpp"
#include "qwigner/dephasing.hpp"
#include "qwigner/fitting.hpp"
#include "qwigner/io.hpp"
#include "qwigner/wigner.hpp"

using namespace qwigner;
using oracle::kPi;

namespace {

struct Verdict {
  bool passed;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BlochStated to_state(const oracle::Bloch& s) { return {s.theta, s.phi, s.r}; }

Verdict three_paths() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(1001);
  double worst = 0, worst_ref = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = oracle::random_state(gen);
    const PhasePointd p{oracle::random_angle(gen), oracle::random_angle(gen)};
    const auto rho = density_from_bloch(to_state(s));
    const double a = wigner_value(rho, p);
    const double b = wigner_closed_form(to_state(s), p);
    const double c = wigner_measurement_form(rho, p);
    worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
    worst_ref = std::max(worst_ref, std::abs(a - oracle::wigner(s, p.xi, p.chi)));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-12 && worst_ref <= 1e-12 && dt < 1.0,
          fmt::format("max path gap {:.2e}, max gap to reference {:.2e}, {:.3f} s", worst, worst_ref, dt)};
}

Verdict normalization() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(1002);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto rho = density_from_bloch(to_state(oracle::random_state(gen)));
    const auto g = wigner_grid(rho, 101, 101, Spand{0, kPi}, Spand{0, 2 * kPi});
    worst = std::max(worst, std::abs(integrate_wigner(g) - 1.0));
  }
  const double dt = seconds_since(t0);
  return {worst <= 1e-6 && dt < 5.0, fmt::format("max |integral - 1| {:.2e}, {:.3f} s", worst, dt)};
}

Verdict pure_minimum() {
  std::mt19937_64 gen(1003);
  const double expected = (1 - std::sqrt(3.0)) / (2 * kPi * kPi);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const auto rep = negativity_report(to_state(oracle::random_state(gen, true)), 64);
    worst = std::max(worst, std::abs(rep.w_min - expected));
  }
  return {worst <= 1e-6 && std::abs(expected - -0.037) < 5e-4,
          fmt::format("W_min = {:.5f}, max deviation {:.2e} over 100 pure states", expected, worst)};
}

Verdict threshold() {
  double worst = 0;
  std::string where;
  for (const auto& [theta, phi] : std::vector<std::pair<double, double>>{{kPi / 2, 0}, {0.3, 1.0}, {2.5, 4.0}}) {
    const double r = negativity_threshold(theta, phi);
    worst = std::max(worst, std::abs(r - 0.57735));
    where += fmt::format(" {:.6f}", r);
  }
  const double r = negativity_threshold(kPi / 2, 0.0);
  const double p = (1 + r * r) / 2;
  return {worst <= 1e-4 && std::abs(p - 2.0 / 3.0) < 1e-4,
          fmt::format("thresholds{}; purity at threshold {:.6f}", where, p)};
}

Verdict table_rows() {
  bool ok = true;
  std::string detail;
  for (const auto& row : oracle::kTable) {
    ComplexMatrix2d m;
    m << row.rho11, std::complex<double>(row.re12, row.im12), std::complex<double>(row.re12, -row.im12),
        1.0 - row.rho11;
    const auto rho = DensityMatrixd::from_matrix(m, 1e-9);
    const double p = purity(rho), r = bloch_from_density(rho).r;
    ok = ok && std::abs(p - row.purity) <= 0.001 && std::abs(r - row.r) <= 0.001;
    detail += fmt::format("{}t={}: {:.4f}/{:.4f}", detail.empty() ? "" : ", ", row.t_ms, p, r);
  }
  return {ok, detail};
}

Verdict wmin_values() {
  const double a = wigner_min_analytic(0.820), b = wigner_min_analytic(0.662), c = wigner_min_analytic(0.436);
  const bool ok = std::abs(a + 0.021) <= 5e-4 && std::abs(b + 0.007) <= 5e-4 && std::abs(c - 0.012) <= 5e-4;
  return {ok, fmt::format("{:.5f}, {:.5f}, {:.5f}", a, b, c)};
}

CampaignConfig fig3_campaign() {
  auto cfg = load_experiment(std::string(QWIGNER_CONFIG_DIR) + "/fig3.json");
  auto c = *cfg.campaign;
  c.detection = DetectionModel{};
  c.contrast_mode = ContrastMode::Off;
  return c;
}

Verdict monte_carlo() {
  auto base = fig3_campaign();
  base.shots = 300;
  std::size_t inside = 0, total = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    base.seed = 7000 + rep;
    for (const auto& row : run_campaign(base).rows) {
      ++total;
      if (std::abs(row.estimate.value - row.w_theory) <= 3 * row.estimate.std_error) ++inside;
    }
  }
  const double coverage = double(inside) / double(total);

  // RMSE against shots on a log-log line.
  std::vector<double> lx, ly;
  for (std::uint64_t shots : {75u, 300u, 1200u, 4800u}) {
    auto c = base;
    c.shots = shots;
    double ss = 0;
    std::size_t n = 0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
      c.seed = 9000 + rep;
      for (const auto& row : run_campaign(c).rows) {
        ss += (row.estimate.value - row.w_theory) * (row.estimate.value - row.w_theory);
        ++n;
      }
    }
    lx.push_back(std::log(double(shots)));
    ly.push_back(std::log(std::sqrt(ss / double(n))));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int k = 0; k < 4; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  const double slope = sxy / sxx;
  return {coverage >= 0.95 && std::abs(slope + 0.5) <= 0.05,
          fmt::format("{}/{} points within 3 stderr ({:.2f}%), RMSE exponent {:.4f}", inside, total,
                      100 * coverage, slope)};
}

Verdict fits() {
  RamseyConfig rc = *load_experiment(std::string(QWIGNER_CONFIG_DIR) + "/ramsey.json").ramsey;
  const auto bundled = run_ramsey(rc);
  bool ok = bundled.fit.has_value();
  double T = 0, sT = 0;
  if (ok) {
    T = bundled.fit->value("T");
    sT = bundled.fit->std_error("T");
    ok = std::abs(T - 17.2) <= 2 * sT && sT >= 1.9 / 3 && sT <= 1.9 * 3;
  }
  // Coverage of the reported error over independent seeds.
  std::size_t inside = 0, fitted = 0;
  std::vector<double> errors;
  for (std::uint64_t s = 0; s < 200; ++s) {
    rc.seed = 50000 + s;
    const auto r = run_ramsey(rc);
    if (!r.fit) continue;
    ++fitted;
    errors.push_back(r.fit->std_error("T"));
    if (std::abs(r.fit->value("T") - 17.2) <= 2 * r.fit->std_error("T")) ++inside;
  }
  const double coverage = fitted ? double(inside) / double(fitted) : 0.0;
  std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
  const double median_err = errors.empty() ? 0.0 : errors[errors.size() / 2];
  ok = ok && fitted >= 195 && coverage >= 0.90;

  std::vector<LinePoint> pts;
  for (double r : {0.436, 0.662, 0.820}) pts.push_back({r, wigner_min_analytic(r), 0.0});
  const auto line = fit_wmin_line(pts);
  const bool line_ok = std::abs(line.value("slope") - -0.087746) < 1e-6 &&
                       std::abs(line.value("slope") - -std::sqrt(3.0) / (2 * kPi * kPi)) <= 1e-12 &&
                       std::abs(line.value("intercept") - 1 / (2 * kPi * kPi)) <= 1e-12 &&
                       std::abs(line.value("crossing") - 1 / std::sqrt(3.0)) <= 1e-12;
  return {ok && line_ok,
          fmt::format("bundled T = {:.2f} +/- {:.2f} ms; 2-sigma coverage {}/{} ({:.1f}%), median error {:.2f} ms; "
                      "line {:.6f} r + {:.6f}, crossing {:.6f}",
                      T, sT, inside, fitted, 100 * coverage, median_err, line.value("slope"),
                      line.value("intercept"), line.value("crossing"))};
}

Verdict dephasing_properties() {
  std::mt19937_64 gen(1009);
  std::uniform_real_distribution<double> ut(0.0, 30.0);
  const auto e = ChannelParams::exponential(17.2);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto rho = density_from_bloch(to_state(oracle::random_state(gen)));
    const double s = ut(gen), t = ut(gen);
    const auto out = dephase(rho, t, e);
    const auto& m = out.matrix();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix2d> es(m);
    worst = std::max({worst, std::abs(m.trace().real() - 1.0), std::abs(m(1, 0) - std::conj(m(0, 1))),
                      std::max(0.0, -es.eigenvalues().minCoeff()),
                      (dephase(dephase(rho, s, e), t, e).matrix() - dephase(rho, s + t, e).matrix()).cwiseAbs().maxCoeff()});
  }
  // Jitter ensemble.
  const auto rho = density_from_bloch(BlochStated{kPi / 2, 0.7, 0.95});
  const auto jitter = JitterModel::matched(e);
  const auto target = dephase(rho, 8.0, e)(0, 1);
  RandomStream rng(2024);
  const int n = 100000;
  double sr = 0, si = 0, sr2 = 0, si2 = 0;
  for (int k = 0; k < n; ++k) {
    const auto c = sample_dephased_state(rho, 8.0, jitter, rng)(0, 1);
    sr += c.real();
    si += c.imag();
    sr2 += c.real() * c.real();
    si2 += c.imag() * c.imag();
  }
  const double mr = sr / n, mi = si / n;
  const double ser = std::sqrt((sr2 / n - mr * mr) / n), sei = std::sqrt((si2 / n - mi * mi) / n);
  const double zr = (mr - target.real()) / ser, zi = (mi - target.imag()) / sei;
  return {worst <= 1e-12 && std::abs(zr) <= 3 && std::abs(zi) <= 3,
          fmt::format("max property violation {:.2e}; jitter average off by {:.2f} and {:.2f} standard errors", worst,
                      zr, zi)};
}

Verdict determinism() {
  const auto cfg = load_experiment(std::string(QWIGNER_CONFIG_DIR) + "/fig4.json");
  auto render = [&](std::size_t threads) {
    const auto r = run_campaign(*cfg.campaign, threads);
    std::ostringstream os;
    write_campaign_csv(os, r);
    return std::make_pair(os.str(), campaign_summary_json(r).dump());
  };
  const auto a = render(1), b = render(4), c = render(7);
  const bool ok = a == b && a == c;
  return {ok, fmt::format("{} CSV bytes, identical for 1, 4 and 7 threads: {}", a.first.size(), ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"three-path equivalence", three_paths},
      {"normalization", normalization},
      {"pure-state minimum", pure_minimum},
      {"negativity threshold", threshold},
      {"tomography table fixtures", table_rows},
      {"W_min at averaged r", wmin_values},
      {"Monte Carlo fidelity", monte_carlo},
      {"fit recovery", fits},
      {"dephasing properties", dephasing_properties},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failed;
    fmt::print("criterion {:2d} {} {}: {}\n", i + 1, o.passed ? "PASS" : "FAIL", criteria[i].first, o.detail);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
