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

#include "qwigner/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "qwigner/errors.hpp"
#include "qwigner/estimation.hpp"
#include "qwigner/parallel.hpp"
#include "qwigner/random.hpp"

namespace qwigner {

namespace {

// Stream tags keep the Wigner, tomography and Ramsey draws disjoint.
constexpr std::uint64_t kWignerStream = 0;
constexpr std::uint64_t kTomographyStream = 1;
constexpr std::uint64_t kRamseyStream = 2;

template <typename F>
void collect(std::vector<std::string>& issues, const std::string& prefix, F&& check) {
  try {
    check();
  } catch (const DomainError& e) {
    issues.push_back(prefix + e.what());
  }
}

DensityMatrixd excited_state() {
  ComplexMatrix2d m = ComplexMatrix2d::Zero();
  m(1, 1) = 1.0;
  return DensityMatrixd::from_matrix(m);
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

void CampaignConfig::validate() const {
  std::vector<std::string> issues;
  collect(issues, "channel: ", [&] { channel.validate(); });
  collect(issues, "pulses: ", [&] { pulses.validate(); });
  collect(issues, "detection: ", [&] { detection.validate(); });
  if (shots == 0) issues.emplace_back("shots: must be at least 1");
  if (scan.times_ms.empty()) issues.emplace_back("scan.times_ms: at least one evolution time required");
  for (double t : scan.times_ms)
    if (!(t >= 0.0) || !std::isfinite(t)) issues.emplace_back("scan.times_ms: times must be finite and >= 0");
  if (scan.points.empty()) issues.emplace_back("scan.points: at least one phase point required");
  for (const auto& p : scan.points)
    if (!p.finite()) issues.emplace_back("scan.points: phase points must be finite");
  if (scan.repeats == 0) issues.emplace_back("scan.repeats: must be at least 1");
  if (tomography.enabled && tomography.shots_per_basis == 0)
    issues.emplace_back("tomography.shots_per_basis: must be at least 1");
  if (fit_wmin && std::set<double>(scan.times_ms.begin(), scan.times_ms.end()).size() < 2)
    issues.emplace_back("fit_wmin: needs at least 2 distinct evolution times");
  if (pulses.dephase_during_rotation && pulses.detuning == 0.0)
    issues.emplace_back("pulses.detuning: must be non-zero when rotations take time");
  if (!issues.empty()) throw ConfigError(issues);
}

DensityMatrixd prepared_state(const DensityMatrixd& target, const DetectionModel& det) {
  if (det.prep_fidelity >= 1.0) return target;
  return target.mix(excited_state(), det.prep_fidelity);
}

double effective_time(double t_ms, const PhasePointd& point, const PulseParams& pulses) {
  if (!pulses.dephase_during_rotation) return t_ms;
  return t_ms + pulses.z_rotation_overhead + duration_for_z(point.xi, pulses);
}

CampaignResult run_campaign(const CampaignConfig& config, std::size_t threads) {
  config.validate();
  const auto& scan = config.scan;
  const std::size_t n_times = scan.times_ms.size();
  const std::size_t n_rep = scan.repeats;
  const std::size_t n_pts = scan.points.size();
  const DensityMatrixd start = prepared_state(config.initial, config.detection);
  const JitterModel jitter = config.evolution == EvolutionMode::Ensemble ? JitterModel::none()
                                                                         : JitterModel::matched(config.channel);

  CampaignResult result;
  result.rows.resize(n_times * n_rep * n_pts);
  parallel_for(result.rows.size(), threads, [&](std::size_t task) {
    const std::size_t ti = task / (n_rep * n_pts);
    const std::size_t rep = (task / n_pts) % n_rep;
    const std::size_t pi = task % n_pts;
    const PhasePointd& point = scan.points[pi];
    const double t = effective_time(scan.times_ms[ti], point, config.pulses);
    RandomStream rng = RandomStream::derive(config.seed, {kWignerStream, ti, rep, pi});

    const DensityMatrixd ensemble = dephase(start, t, config.channel);
    CampaignRow& row = result.rows[task];
    row.t_ms = scan.times_ms[ti];
    row.repeat = rep;
    row.w_theory = wigner_value(ensemble, point);

    switch (config.evolution) {
      case EvolutionMode::Ensemble:
        row.estimate = run_wigner_point(ensemble, point, config.shots, config.detection, config.contrast_mode, rng);
        break;
      case EvolutionMode::JitterPerPoint: {
        const auto realization = sample_dephased_state(start, t, jitter, rng);
        row.estimate =
            run_wigner_point(realization, point, config.shots, config.detection, config.contrast_mode, rng);
        break;
      }
      case EvolutionMode::JitterPerShot: {
        ShotTally tally;
        for (std::uint64_t s = 0; s < config.shots; ++s) {
          const auto realization = sample_dephased_state(start, t, jitter, rng);
          const auto rotated = rotate_for_measurement(realization, point, config.detection, config.contrast_mode);
          if (measure_shot(rotated, config.detection, rng) == Outcome::Retained)
            ++tally.n_retained;
          else
            ++tally.n_lost;
        }
        tally.point = point;
        row.estimate = estimate_wigner_from_tally(tally);
        break;
      }
    }
  });

  // Tomography, one reconstruction per (time, repeat).
  std::vector<double> r_tomo(n_times * n_rep, 0.0);
  if (config.tomography.enabled) {
    parallel_for(r_tomo.size(), threads, [&](std::size_t task) {
      const std::size_t ti = task / n_rep;
      const std::size_t rep = task % n_rep;
      RandomStream rng = RandomStream::derive(config.seed, {kTomographyStream, ti, rep});
      const auto rho = dephase(start, scan.times_ms[ti], config.channel);
      const auto tallies = simulate_tomography(rho, config.tomography.shots_per_basis, config.detection, rng,
                                               config.contrast_mode);
      r_tomo[task] = tomography_linear_inversion(tallies).bloch.r;
    });
  }

  for (std::size_t ti = 0; ti < n_times; ++ti) {
    TimeSummary s;
    s.t_ms = scan.times_ms[ti];
    s.r_model = bloch_from_density(dephase(start, s.t_ms, config.channel)).r;
    s.w_min_analytic = wigner_min_analytic(s.r_model);
    s.w_min_theory_scan = std::numeric_limits<double>::infinity();
    for (std::size_t rep = 0; rep < n_rep; ++rep) {
      double best = std::numeric_limits<double>::infinity();
      PhasePointd at{};
      for (std::size_t pi = 0; pi < n_pts; ++pi) {
        const auto& row = result.rows[(ti * n_rep + rep) * n_pts + pi];
        s.w_min_theory_scan = std::min(s.w_min_theory_scan, row.w_theory);
        if (row.estimate.value < best) {
          best = row.estimate.value;
          at = row.estimate.tally.point;
        }
      }
      if (rep == 0) s.argmin = at;
      s.w_min_per_repeat.push_back(best);
      if (config.tomography.enabled) s.r_tomography.push_back(r_tomo[ti * n_rep + rep]);
    }
    s.w_min_mean = mean(s.w_min_per_repeat);
    if (n_rep > 1) {
      s.w_min_error = standard_error(s.w_min_per_repeat);
    } else {
      const std::size_t base = ti * n_pts;
      for (std::size_t pi = 0; pi < n_pts; ++pi)
        if (result.rows[base + pi].estimate.value == s.w_min_mean)
          s.w_min_error = result.rows[base + pi].estimate.std_error;
    }
    if (config.tomography.enabled) s.r_tomography_mean = mean(s.r_tomography);
    result.summaries.push_back(std::move(s));
  }

  if (config.fit_wmin) {
    std::vector<LinePoint> pts;
    for (const auto& s : result.summaries)
      pts.push_back({s.r_tomography_mean.value_or(s.r_model), s.w_min_mean, s.w_min_error});
    result.wmin_fit = fit_wmin_line(pts);
  }
  return result;
}

void RamseyConfig::validate() const {
  std::vector<std::string> issues;
  collect(issues, "channel: ", [&] { channel.validate(); });
  collect(issues, "pulses: ", [&] { pulses.validate(); });
  collect(issues, "detection: ", [&] { detection.validate(); });
  if (shots == 0) issues.emplace_back("shots: must be at least 1");
  if (delays_ms.empty()) issues.emplace_back("ramsey.delays_ms: at least one delay required");
  for (double t : delays_ms)
    if (!(t >= 0.0) || !std::isfinite(t)) issues.emplace_back("ramsey.delays_ms: delays must be finite and >= 0");
  if (!issues.empty()) throw ConfigError(issues);
}

std::vector<DecaySample> ramsey_samples(std::span<const SurvivalEstimate> points) {
  std::vector<DecaySample> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double n = static_cast<double>(p.n_retained + p.n_lost);
    const double q = (static_cast<double>(p.n_retained) + 0.5) / (n + 1.0);
    out.push_back({p.t_ms, p.p_hat, n / (q * (1.0 - q))});
  }
  return out;
}

RamseyResult run_ramsey(const RamseyConfig& config, std::size_t threads) {
  config.validate();
  RamseyResult out;
  out.points.resize(config.delays_ms.size());
  out.expectation.resize(config.delays_ms.size());
  parallel_for(config.delays_ms.size(), threads, [&](std::size_t k) {
    RandomStream rng = RandomStream::derive(config.seed, {kRamseyStream, k});
    const double t = config.delays_ms[k];
    out.points[k] = ramsey_sequence(t, config.pulses, config.channel, config.detection, config.shots, rng);
    out.expectation[k] = ramsey_expectation(t, config.pulses, config.channel, config.detection);
  });
  try {
    const auto samples = ramsey_samples(out.points);
    out.fit = fit_exponential_decay(samples, DecayFitMode::FullFringe, config.weighting);
  } catch (const std::exception& e) {
    out.fit_error = e.what();
  }
  return out;
}

}  // namespace qwigner
