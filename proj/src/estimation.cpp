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

#include "qwigner/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qwigner/errors.hpp"

namespace qwigner {

double BasisTally::expectation() const {
  if (total() == 0) throw DomainError("tomography: basis has no shots");
  return (static_cast<double>(n_plus) - static_cast<double>(n_minus)) / static_cast<double>(total());
}

UnitaryMatrixd basis_rotation(PauliBasis basis) {
  constexpr double half_pi = std::numbers::pi / 2;
  switch (basis) {
    case PauliBasis::X:
      return rotation_x(half_pi) * rotation_z(half_pi);
    case PauliBasis::Y:
      return rotation_x(half_pi);
    case PauliBasis::Z:
      break;
  }
  return UnitaryMatrixd{};
}

TomographyResult tomography_from_expectations(const Vector3<double>& expectations) {
  TomographyResult out;
  out.expectations = expectations;
  out.raw_r = expectations.norm();
  Vector3<double> v = expectations;
  if (out.raw_r > 1.0) {
    v /= out.raw_r;
    out.clamped = true;
  }
  out.rho = DensityMatrixd::from_bloch_vector(v);
  out.bloch = bloch_from_density(out.rho);
  out.purity = purity(out.rho);
  return out;
}

TomographyResult tomography_linear_inversion(const PauliTallies& tallies) {
  const Vector3<double> m(tallies.x.expectation(), tallies.y.expectation(), tallies.z.expectation());
  TomographyResult out = tomography_from_expectations(m);
  auto sd = [](const BasisTally& b) {
    const double e = b.expectation();
    return std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(b.total()));
  };
  // rho11 = (1 + z)/2, Re rho12 = x/2, Im rho12 = -y/2
  out.entry_errors.rho11 = sd(tallies.z) / 2.0;
  out.entry_errors.rho22 = out.entry_errors.rho11;
  out.entry_errors.re12 = sd(tallies.x) / 2.0;
  out.entry_errors.im12 = sd(tallies.y) / 2.0;
  return out;
}

PauliTallies simulate_tomography(const DensityMatrixd& rho, std::uint64_t shots_per_basis,
                                 const DetectionModel& det, RandomStream& rng, ContrastMode mode) {
  if (shots_per_basis == 0) throw DomainError("simulate_tomography: shots must be at least 1");
  const double c = mode == ContrastMode::On ? det.contrast : 1.0;
  auto run = [&](PauliBasis b) {
    const auto final_state = apply_pulse(rho, basis_rotation(b), c);
    const auto t = measure_shots(final_state, shots_per_basis, det, rng);
    return BasisTally{t.n_retained, t.n_lost};
  };
  PauliTallies out;
  out.x = run(PauliBasis::X);
  out.y = run(PauliBasis::Y);
  out.z = run(PauliBasis::Z);
  return out;
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("sample_quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Interval bootstrap_errors(std::span<const ShotTally> tallies, std::size_t resamples,
                          const TallyStatistic& statistic, RandomStream& rng) {
  if (resamples < 100) throw DomainError("bootstrap_errors: need at least 100 resamples");
  if (tallies.empty()) throw DomainError("bootstrap_errors: no tallies");
  for (const auto& t : tallies)
    if (t.total() == 0) throw DomainError("bootstrap_errors: empty tally");

  std::vector<double> stats(resamples);
  std::vector<ShotTally> resampled(tallies.begin(), tallies.end());
  for (std::size_t i = 0; i < resamples; ++i) {
    RandomStream stream = rng.split(i);
    for (std::size_t k = 0; k < tallies.size(); ++k) {
      const double p = tallies[k].p0_hat();
      std::uint64_t kept = 0;
      for (std::uint64_t s = 0; s < tallies[k].total(); ++s) kept += stream.bernoulli(p) ? 1 : 0;
      resampled[k].n_retained = kept;
      resampled[k].n_lost = tallies[k].total() - kept;
    }
    stats[i] = statistic(resampled);
  }
  Interval out;
  out.estimate = statistic(tallies);
  out.lo = sample_quantile(stats, 0.025);
  out.hi = sample_quantile(stats, 0.975);
  return out;
}

}  // namespace qwigner
