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
 * @file dephasing.hpp
 * Pure dephasing of a single qubit. Populations are left alone and the
 * coherence rho12 is multiplied by a decay factor f(t) in (0, 1].
 *
 * Two pictures are offered. dephase() is the ensemble map. sample_dephased_state()
 * draws one realization with a random phase kick of standard deviation
 * sigma(t); averaging realizations gives back dephase() with
 * f(t) = exp(-sigma(t)^2 / 2).
 */

#ifndef QWIGNER_DEPHASING_HPP
#define QWIGNER_DEPHASING_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qwigner/qubit.hpp"
#include "qwigner/random.hpp"

namespace qwigner {

enum class DecayKernel {
  Exponential,  ///< exp(-t / T2)
  Gaussian,     ///< exp(-(t / T2)^2)
  Table,        ///< piecewise-linear calibration through (t, f) points
};

std::string to_string(DecayKernel k);
DecayKernel decay_kernel_from_string(const std::string& s);

struct ChannelParams {
  DecayKernel kernel = DecayKernel::Exponential;
  double t2_ms = 17.2;  ///< 1/e coherence time (ignored by Table)
  double r0 = 1.0;      ///< Bloch radius at t = 0
  /// (t_ms, factor) pairs for DecayKernel::Table. Must start at (0, 1) with
  /// strictly increasing times; the last factor is held beyond the last time.
  std::vector<std::pair<double, double>> table;

  static ChannelParams exponential(double t2_ms, double r0 = 1.0);
  static ChannelParams gaussian(double t2_ms, double r0 = 1.0);
  static ChannelParams calibrated(std::vector<std::pair<double, double>> points, double r0 = 1.0);

  /// Throws DomainError on the first violated invariant.
  void validate() const;
};

/// f(t) in (0, 1]; f(0) = 1.
double decay_factor(double t_ms, const ChannelParams& params);

/// Off-diagonals scaled by decay_factor(t); diagonal entries untouched.
DensityMatrixd dephase(const DensityMatrixd& rho, double t_ms, const ChannelParams& params);

/// r0 * f(t). Only meaningful on the equator, where the Bloch radius is the
/// coherence magnitude; throws OffAxisWarning when |theta - pi/2| > theta_tol.
double r_of_t(double t_ms, const ChannelParams& params, double theta, double theta_tol = 0.05);

/// Phase noise amplitude as a function of evolution time.
class JitterModel {
 public:
  using Sigma = std::function<double(double)>;

  /// Throws DomainError if sigma(0) != 0.
  explicit JitterModel(Sigma sigma_of_t);

  /// sigma(t) = sqrt(-2 ln f(t)), so the realization average reproduces dephase().
  static JitterModel matched(const ChannelParams& params);
  static JitterModel none();

  double sigma(double t_ms) const;

 private:
  Sigma sigma_;
};

/// rho12 -> rho12 exp(-i dphi), i.e. the azimuth advances by dphi.
DensityMatrixd phase_shift(const DensityMatrixd& rho, double dphi);

/// One realization: rho0 with a Normal(0, sigma(t)^2) phase kick.
DensityMatrixd sample_dephased_state(const DensityMatrixd& rho0, double t_ms, const JitterModel& jitter,
                                     RandomStream& rng);

}  // namespace qwigner

#endif  // QWIGNER_DEPHASING_HPP
