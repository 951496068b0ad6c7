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

/**
 * @file shots.hpp
 * Single-atom measurement sequence: microwave pulse timing, imperfect
 * rotations, push-out detection, and the per-point Wigner and Ramsey
 * estimators built on repeated shots.
 */

#ifndef QWIGNER_SHOTS_HPP
#define QWIGNER_SHOTS_HPP

#include <cstdint>
#include <numbers>

#include "qwigner/dephasing.hpp"
#include "qwigner/qubit.hpp"
#include "qwigner/random.hpp"
#include "qwigner/tally.hpp"
#include "qwigner/wigner.hpp"

namespace qwigner {

/// Microwave control. Defaults keep a full measurement (2pi about z plus
/// 2pi about x) under 1 ms.
struct PulseParams {
  double rabi_freq = 4.0 * std::numbers::pi;  ///< Omega_R, rad/ms
  double detuning = 4.0 * std::numbers::pi;   ///< Delta, rad/ms
  /// Fixed dead time added to every z rotation, ms.
  double z_rotation_overhead = 0.0;
  /// When set, the z rotation takes xi/Delta (+ overhead) of real time and the
  /// state keeps dephasing meanwhile.
  bool dephase_during_rotation = false;

  void validate() const;
};

/// Readout and control imperfections. All defaults are ideal.
struct DetectionModel {
  double contrast = 1.0;       ///< Rabi-flop contrast C, (0, 1]
  double eps0 = 0.0;           ///< P(lost | atom in |0>)
  double eps1 = 0.0;           ///< P(retained | atom in |1>)
  double prep_fidelity = 1.0;  ///< P(preparation pulse succeeds)

  void validate() const;

  /// p0 (1 - eps0) + (1 - p0) eps1
  double retained_probability(double p0) const;
  /// Inverse of retained_probability; undefined when eps0 + eps1 == 1.
  double ideal_p0(double p_retained) const;
};

enum class ContrastMode { Off, On };
enum class Outcome { Retained, Lost };

/// xi (reduced into [0, 2pi)) divided by the detuning.
double duration_for_z(double xi, const PulseParams& pulse);
/// chi / Omega_R.
double duration_for_x(double chi, const PulseParams& pulse);

/// A rotation that works with probability `contrast` and leaves the state
/// alone otherwise: rho -> C U rho U^dagger + (1 - C) rho. A Rabi flop driven
/// through this map oscillates with amplitude C.
DensityMatrixd apply_pulse(const DensityMatrixd& rho, const UnitaryMatrixd& u, double contrast = 1.0);

/// R_x(-chi) R_z(-xi) applied to rho. With ContrastMode::On the chi pulse is
/// degraded by det.contrast; the z rotation is free precession and stays ideal.
DensityMatrixd rotate_for_measurement(const DensityMatrixd& rho, const PhasePointd& point,
                                      const DetectionModel& det, ContrastMode mode);

/// One push-out detection. P(Retained) = p0 (1 - eps0) + p1 eps1.
Outcome measure_shot(const DensityMatrixd& rho_final, const DetectionModel& det, RandomStream& rng);

/// `shots` detections of rho_final; returns (retained, lost).
ShotTally measure_shots(const DensityMatrixd& rho_final, std::uint64_t shots, const DetectionModel& det,
                        RandomStream& rng);

/// Full per-point sequence: rotate, detect `shots` times, estimate W.
WignerEstimate run_wigner_point(const DensityMatrixd& rho, const PhasePointd& point, std::uint64_t shots,
                                const DetectionModel& det, ContrastMode mode, RandomStream& rng);

struct SurvivalEstimate {
  double t_ms = 0.0;
  std::uint64_t n_retained = 0;
  std::uint64_t n_lost = 0;
  double p_hat = 0.0;
  double std_error = 0.0;
};

/// Noise-free survival probability of the Ramsey sequence, including pulse
/// contrast and detection distortion. With ideal hardware this is
/// (1 + f(t) cos(Delta t)) / 2.
double ramsey_expectation(double t_delay, const PulseParams& pulse, const ChannelParams& channel,
                          const DetectionModel& det);

/// Atom starts in |1>; R_x(pi/2) takes it to (|0> + i|1>)/sqrt2 up to a global
/// phase, it precesses at Delta while dephasing for t_delay, a second R_x(pi/2)
/// closes the interferometer, and the atom is detected. At zero delay the two
/// pulses form a pi pulse and the atom is retained with certainty.
SurvivalEstimate ramsey_sequence(double t_delay, const PulseParams& pulse, const ChannelParams& channel,
                                 const DetectionModel& det, std::uint64_t shots, RandomStream& rng);

}  // namespace qwigner

#endif  // QWIGNER_SHOTS_HPP
