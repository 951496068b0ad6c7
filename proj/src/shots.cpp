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

#include "qwigner/shots.hpp"

#include <algorithm>
#include <cmath>

#include "qwigner/errors.hpp"

namespace qwigner {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

DensityMatrixd excited_state() {
  ComplexMatrix2d m = ComplexMatrix2d::Zero();
  m(1, 1) = 1.0;
  return DensityMatrixd::from_matrix(m);
}

}  // namespace

double ShotTally::p0_hat() const {
  if (total() == 0) throw DomainError("ShotTally: no shots recorded");
  return static_cast<double>(n_retained) / static_cast<double>(total());
}

WignerEstimate estimate_wigner_from_tally(const ShotTally& tally) {
  constexpr double flat = WignerConstants<double>::flat;
  constexpr double sqrt3 = WignerConstants<double>::sqrt3;
  const double p0 = tally.p0_hat();
  const double n = static_cast<double>(tally.total());
  WignerEstimate est;
  est.tally = tally;
  est.value = flat * (1.0 - sqrt3 * (2.0 * p0 - 1.0));
  est.std_error = sqrt3 * flat * 2.0 * std::sqrt(p0 * (1.0 - p0) / n);
  return est;
}

void PulseParams::validate() const {
  if (!(rabi_freq > 0.0) || !std::isfinite(rabi_freq)) throw DomainError("pulses: rabi_freq must be positive");
  if (!std::isfinite(detuning)) throw DomainError("pulses: detuning must be finite");
  if (!(z_rotation_overhead >= 0.0)) throw DomainError("pulses: z_rotation_overhead must be non-negative");
}

void DetectionModel::validate() const {
  if (!(contrast > 0.0 && contrast <= 1.0)) throw DomainError("detection: contrast must lie in (0, 1]");
  if (!is_probability(eps0)) throw DomainError("detection: eps0 must lie in [0, 1]");
  if (!is_probability(eps1)) throw DomainError("detection: eps1 must lie in [0, 1]");
  if (!is_probability(prep_fidelity)) throw DomainError("detection: prep_fidelity must lie in [0, 1]");
}

double DetectionModel::retained_probability(double p0) const { return p0 * (1.0 - eps0) + (1.0 - p0) * eps1; }

double DetectionModel::ideal_p0(double p_retained) const {
  const double gain = 1.0 - eps0 - eps1;
  if (gain == 0.0) throw DomainError("detection: eps0 + eps1 == 1 carries no information");
  return (p_retained - eps1) / gain;
}

double duration_for_z(double xi, const PulseParams& pulse) {
  if (pulse.detuning == 0.0) throw DomainError("duration_for_z: zero detuning cannot rotate about z");
  return wrap_two_pi(xi) / std::abs(pulse.detuning);
}

double duration_for_x(double chi, const PulseParams& pulse) {
  if (!(pulse.rabi_freq > 0.0)) throw DomainError("duration_for_x: rabi_freq must be positive");
  return chi / pulse.rabi_freq;
}

DensityMatrixd apply_pulse(const DensityMatrixd& rho, const UnitaryMatrixd& u, double contrast) {
  const auto rotated = conjugate_state(rho, u);
  if (contrast >= 1.0) return rotated;
  return rotated.mix(rho, contrast);
}

DensityMatrixd rotate_for_measurement(const DensityMatrixd& rho, const PhasePointd& point,
                                      const DetectionModel& det, ContrastMode mode) {
  const auto precessed = conjugate_state(rho, rotation_z(-point.xi));
  const double c = mode == ContrastMode::On ? det.contrast : 1.0;
  return apply_pulse(precessed, rotation_x(-point.chi), c);
}

Outcome measure_shot(const DensityMatrixd& rho_final, const DetectionModel& det, RandomStream& rng) {
  const double p0 = std::clamp(rho_final(0, 0).real(), 0.0, 1.0);
  return rng.bernoulli(det.retained_probability(p0)) ? Outcome::Retained : Outcome::Lost;
}

ShotTally measure_shots(const DensityMatrixd& rho_final, std::uint64_t shots, const DetectionModel& det,
                        RandomStream& rng) {
  ShotTally t;
  for (std::uint64_t k = 0; k < shots; ++k) {
    if (measure_shot(rho_final, det, rng) == Outcome::Retained)
      ++t.n_retained;
    else
      ++t.n_lost;
  }
  return t;
}

WignerEstimate run_wigner_point(const DensityMatrixd& rho, const PhasePointd& point, std::uint64_t shots,
                                const DetectionModel& det, ContrastMode mode, RandomStream& rng) {
  if (shots == 0) throw DomainError("run_wigner_point: shots must be at least 1");
  auto tally = measure_shots(rotate_for_measurement(rho, point, det, mode), shots, det, rng);
  tally.point = point;
  return estimate_wigner_from_tally(tally);
}

namespace {

DensityMatrixd ramsey_final_state(double t_delay, const PulseParams& pulse, const ChannelParams& channel,
                                  const DetectionModel& det) {
  if (!(t_delay >= 0.0)) throw DomainError("ramsey: delay must be non-negative");
  const auto half_pi = rotation_x(std::numbers::pi / 2);
  auto rho = apply_pulse(excited_state(), half_pi, det.contrast);
  rho = dephase(rho, t_delay, channel);
  rho = conjugate_state(rho, rotation_z(pulse.detuning * t_delay));
  return apply_pulse(rho, half_pi, det.contrast);
}

}  // namespace

double ramsey_expectation(double t_delay, const PulseParams& pulse, const ChannelParams& channel,
                          const DetectionModel& det) {
  const auto rho = ramsey_final_state(t_delay, pulse, channel, det);
  return det.retained_probability(std::clamp(rho(0, 0).real(), 0.0, 1.0));
}

SurvivalEstimate ramsey_sequence(double t_delay, const PulseParams& pulse, const ChannelParams& channel,
                                 const DetectionModel& det, std::uint64_t shots, RandomStream& rng) {
  if (shots == 0) throw DomainError("ramsey: shots must be at least 1");
  const auto tally = measure_shots(ramsey_final_state(t_delay, pulse, channel, det), shots, det, rng);
  SurvivalEstimate s;
  s.t_ms = t_delay;
  s.n_retained = tally.n_retained;
  s.n_lost = tally.n_lost;
  s.p_hat = tally.p0_hat();
  s.std_error = std::sqrt(s.p_hat * (1.0 - s.p_hat) / static_cast<double>(shots));
  return s;
}

}  // namespace qwigner
