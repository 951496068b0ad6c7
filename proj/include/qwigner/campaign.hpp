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
 * @file campaign.hpp
 * Whole experiments: prepare a state, let it dephase, scan Wigner points
 * shot by shot, optionally run tomography at each time, and summarize the
 * located minima. Ramsey delay scans live here too.
 *
 * Reproducibility: every (time, repeat, point) task draws from its own stream
 * RandomStream::derive(seed, {kind, time, repeat, point}), and results are
 * stored by index, so output is identical for any thread count.
 */

#ifndef QWIGNER_CAMPAIGN_HPP
#define QWIGNER_CAMPAIGN_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwigner/dephasing.hpp"
#include "qwigner/fitting.hpp"
#include "qwigner/shots.hpp"

namespace qwigner {

enum class EvolutionMode {
  Ensemble,        ///< deterministic dephase() of the ensemble state
  JitterPerShot,   ///< each shot sees its own random phase kick
  JitterPerPoint,  ///< one phase kick shared by all shots at a phase point
};

struct ScanSpec {
  std::vector<double> times_ms{0.0};
  std::vector<PhasePointd> points;
  std::size_t repeats = 1;  ///< independent re-measurements of the whole scan
};

struct TomographySpec {
  bool enabled = false;
  std::uint64_t shots_per_basis = 300;
};

struct CampaignConfig {
  DensityMatrixd initial = DensityMatrixd::maximally_mixed();
  ChannelParams channel;
  EvolutionMode evolution = EvolutionMode::Ensemble;
  PulseParams pulses;
  DetectionModel detection;
  ContrastMode contrast_mode = ContrastMode::Off;
  ScanSpec scan;
  std::uint64_t shots = 300;
  std::uint64_t seed = 0;
  TomographySpec tomography;
  bool fit_wmin = false;

  /// Collects every problem and throws ConfigError listing them.
  void validate() const;
};

struct CampaignRow {
  double t_ms = 0.0;
  std::size_t repeat = 0;
  WignerEstimate estimate;
  double w_theory = 0.0;  ///< ideal-detection value of the ensemble state
};

struct TimeSummary {
  double t_ms = 0.0;
  double r_model = 0.0;          ///< Bloch radius of the ensemble state
  double w_min_analytic = 0.0;   ///< (1 - sqrt3 r_model) / 2pi^2
  double w_min_theory_scan = 0.0;  ///< smallest ideal value among the scanned points
  double w_min_mean = 0.0;       ///< mean over repeats of the smallest estimate
  double w_min_error = 0.0;      ///< standard error of w_min_mean
  PhasePointd argmin{};          ///< location of the smallest estimate, repeat 0
  std::vector<double> w_min_per_repeat;
  std::vector<double> r_tomography;  ///< one reconstruction per repeat, if enabled
  std::optional<double> r_tomography_mean;
};

struct CampaignResult {
  std::vector<CampaignRow> rows;  ///< ordered by time, repeat, point
  std::vector<TimeSummary> summaries;
  std::optional<FitResult> wmin_fit;
};

/// Initial state after a preparation that fails with probability
/// 1 - prep_fidelity and then leaves the optically pumped |1>.
DensityMatrixd prepared_state(const DensityMatrixd& target, const DetectionModel& det);

/// Evolution time actually seen at a phase point, including any z-rotation time.
double effective_time(double t_ms, const PhasePointd& point, const PulseParams& pulses);

CampaignResult run_campaign(const CampaignConfig& config, std::size_t threads = 1);

struct RamseyConfig {
  PulseParams pulses;
  ChannelParams channel;
  DetectionModel detection;
  std::vector<double> delays_ms;
  std::uint64_t shots = 100;
  std::uint64_t seed = 0;
  Weighting weighting = Weighting::InverseVariance;

  void validate() const;
};

struct RamseyResult {
  std::vector<SurvivalEstimate> points;
  std::vector<double> expectation;  ///< noise-free survival at each delay
  std::optional<FitResult> fit;     ///< empty if the fit failed
  std::string fit_error;
};

/// Scans the delays (delay k uses stream derive(seed, {2, k})) and fits the
/// full fringe model A exp(-t/T) cos(Delta t + phi0) + c.
RamseyResult run_ramsey(const RamseyConfig& config, std::size_t threads = 1);

/// Inverse-variance weights for survival estimates; the binomial variance
/// uses the add-half estimate so that all-retained or all-lost delays keep a
/// finite weight.
std::vector<DecaySample> ramsey_samples(std::span<const SurvivalEstimate> points);

}  // namespace qwigner

#endif  // QWIGNER_CAMPAIGN_HPP
