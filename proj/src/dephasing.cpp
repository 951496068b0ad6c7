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

#include "qwigner/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qwigner/errors.hpp"

namespace qwigner {

std::string to_string(DecayKernel k) {
  switch (k) {
    case DecayKernel::Exponential:
      return "exponential";
    case DecayKernel::Gaussian:
      return "gaussian";
    case DecayKernel::Table:
      return "table";
  }
  return "unknown";
}

DecayKernel decay_kernel_from_string(const std::string& s) {
  if (s == "exponential") return DecayKernel::Exponential;
  if (s == "gaussian") return DecayKernel::Gaussian;
  if (s == "table") return DecayKernel::Table;
  throw DomainError("unknown decay kernel '" + s + "' (expected exponential, gaussian or table)");
}

ChannelParams ChannelParams::exponential(double t2_ms, double r0) {
  ChannelParams p;
  p.kernel = DecayKernel::Exponential;
  p.t2_ms = t2_ms;
  p.r0 = r0;
  p.validate();
  return p;
}

ChannelParams ChannelParams::gaussian(double t2_ms, double r0) {
  ChannelParams p = exponential(t2_ms, r0);
  p.kernel = DecayKernel::Gaussian;
  return p;
}

ChannelParams ChannelParams::calibrated(std::vector<std::pair<double, double>> points, double r0) {
  ChannelParams p;
  p.kernel = DecayKernel::Table;
  p.table = std::move(points);
  p.r0 = r0;
  p.validate();
  return p;
}

void ChannelParams::validate() const {
  if (!(r0 >= 0.0 && r0 <= 1.0)) throw DomainError("channel: r0 must lie in [0, 1]");
  if (kernel != DecayKernel::Table) {
    if (!(t2_ms > 0.0) || !std::isfinite(t2_ms)) throw DomainError("channel: t2_ms must be positive");
    return;
  }
  if (table.empty()) throw DomainError("channel: table kernel needs at least one point");
  if (table.front().first != 0.0 || table.front().second != 1.0)
    throw DomainError("channel: table must start at (0, 1)");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto [t, f] = table[i];
    if (!std::isfinite(t) || !(f > 0.0 && f <= 1.0))
      throw DomainError("channel: table factors must lie in (0, 1]");
    if (i > 0 && !(t > table[i - 1].first)) throw DomainError("channel: table times must increase strictly");
  }
}

double decay_factor(double t_ms, const ChannelParams& params) {
  if (!(t_ms >= 0.0)) throw DomainError("decay_factor: time must be non-negative");
  switch (params.kernel) {
    case DecayKernel::Exponential:
      return std::exp(-t_ms / params.t2_ms);
    case DecayKernel::Gaussian: {
      const double x = t_ms / params.t2_ms;
      return std::exp(-x * x);
    }
    case DecayKernel::Table: {
      const auto& pts = params.table;
      if (t_ms >= pts.back().first) return pts.back().second;
      const auto hi = std::upper_bound(pts.begin(), pts.end(), t_ms,
                                       [](double t, const auto& p) { return t < p.first; });
      const auto lo = hi - 1;
      const double w = (t_ms - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  throw DomainError("decay_factor: unknown kernel");
}

DensityMatrixd dephase(const DensityMatrixd& rho, double t_ms, const ChannelParams& params) {
  return with_offdiagonal(rho, rho(0, 1) * decay_factor(t_ms, params));
}

double r_of_t(double t_ms, const ChannelParams& params, double theta, double theta_tol) {
  if (std::abs(theta - std::numbers::pi / 2) > theta_tol)
    throw OffAxisWarning("r_of_t: theta is off the equator; r is not the coherence magnitude");
  return params.r0 * decay_factor(t_ms, params);
}

JitterModel::JitterModel(Sigma sigma_of_t) : sigma_(std::move(sigma_of_t)) {
  if (!sigma_) throw DomainError("JitterModel: empty sigma function");
  if (sigma_(0.0) != 0.0) throw DomainError("JitterModel: sigma(0) must be 0");
}

JitterModel JitterModel::matched(const ChannelParams& params) {
  params.validate();
  return JitterModel([params](double t) {
    const double f = decay_factor(t, params);
    return f >= 1.0 ? 0.0 : std::sqrt(-2.0 * std::log(f));
  });
}

JitterModel JitterModel::none() {
  return JitterModel([](double) { return 0.0; });
}

double JitterModel::sigma(double t_ms) const { return sigma_(t_ms); }

DensityMatrixd phase_shift(const DensityMatrixd& rho, double dphi) {
  return with_offdiagonal(rho, rho(0, 1) * std::polar(1.0, -dphi));
}

DensityMatrixd sample_dephased_state(const DensityMatrixd& rho0, double t_ms, const JitterModel& jitter,
                                     RandomStream& rng) {
  const double sigma = jitter.sigma(t_ms);
  if (sigma == 0.0) return rho0;
  return phase_shift(rho0, sigma * rng.normal());
}

}  // namespace qwigner
