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

#include "qwigner/selftest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qwigner {

BlochStated random_bloch_state(RandomStream& rng, bool pure) {
  const double z = 2.0 * rng.uniform() - 1.0;
  BlochStated s;
  s.theta = std::acos(std::clamp(z, -1.0, 1.0));
  s.phi = 2.0 * std::numbers::pi * rng.uniform();
  s.r = pure ? 1.0 : rng.uniform();
  return s;
}

namespace {

using Kernel = std::function<ComplexMatrix2d(const PhasePointd&)>;

double value_with(const Kernel& k, const DensityMatrixd& rho, const PhasePointd& p) {
  return (rho.matrix() * k(p)).trace().real() / (std::numbers::pi * std::numbers::pi);
}

SelftestCheck path_equivalence(const Kernel& k, RandomStream rng) {
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto s = random_bloch_state(rng);
    const auto rho = density_from_bloch(s);
    const PhasePointd p{2 * std::numbers::pi * rng.uniform(), 2 * std::numbers::pi * rng.uniform()};
    const double a = value_with(k, rho, p);
    worst = std::max({worst, std::abs(a - wigner_closed_form(s, p)), std::abs(a - wigner_measurement_form(rho, p))});
  }
  return {"path-equivalence", worst < 1e-12, fmt::format("max deviation {:.3g}", worst)};
}

SelftestCheck normalization(const Kernel& k, RandomStream rng) {
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const auto rho = density_from_bloch(random_bloch_state(rng));
    WignerGridd g;
    g.xi_axis = linspace(Spand{0, std::numbers::pi}, 101);
    g.chi_axis = linspace(Spand{0, 2 * std::numbers::pi}, 101);
    g.values.resize(101, 101);
    for (Eigen::Index a = 0; a < 101; ++a)
      for (Eigen::Index b = 0; b < 101; ++b) g.values(a, b) = value_with(k, rho, {g.xi_axis[a], g.chi_axis[b]});
    worst = std::max(worst, std::abs(integrate_wigner(g) - 1.0));
  }
  return {"normalization", worst < 1e-6, fmt::format("max |integral - 1| {:.3g}", worst)};
}

SelftestCheck pure_minimum(const Kernel& k, RandomStream rng) {
  const double expected = wigner_min_analytic(1.0);
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    const auto rho = density_from_bloch(random_bloch_state(rng, true));
    const auto found = locate_minimum<double>([&](const PhasePointd& p) { return value_with(k, rho, p); }, 64);
    worst = std::max(worst, std::abs(found.first - expected));
  }
  return {"pure-state-minimum", worst < 1e-6, fmt::format("max deviation {:.3g}", worst)};
}

SelftestCheck threshold(const Kernel& k) {
  auto w_min = [&](double r) {
    const auto rho = density_from_bloch(BlochStated{std::numbers::pi / 2, 0.0, r});
    return locate_minimum<double>([&](const PhasePointd& p) { return value_with(k, rho, p); }, 64).first;
  };
  double lo = 0, hi = 1;
  if (!(w_min(lo) > 0 && w_min(hi) < 0))
    return {"negativity-threshold", false, "no sign change of the minimum on r in [0, 1]"};
  while (hi - lo > 1e-7) {
    const double mid = (lo + hi) / 2;
    (w_min(mid) > 0 ? lo : hi) = mid;
  }
  const double r = (lo + hi) / 2;
  const double dev = std::abs(r - 1.0 / std::sqrt(3.0));
  return {"negativity-threshold", dev < 1e-4, fmt::format("threshold r = {:.7f}", r)};
}

}  // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options) {
  const RandomStream root(options.seed);
  std::vector<SelftestCheck> out;
  auto guarded = [&](auto&& check) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"unexpected-exception", false, e.what()});
    }
  };
  guarded([&] { return path_equivalence(options.kernel, root.split(0)); });
  guarded([&] { return normalization(options.kernel, root.split(1)); });
  guarded([&] { return pure_minimum(options.kernel, root.split(2)); });
  guarded([&] { return threshold(options.kernel); });
  return out;
}

std::vector<SelftestCheck> run_selftest() { return run_selftest(SelftestOptions{}); }

}  // namespace qwigner
