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
 * @file fitting.hpp
 * Weighted least squares: a damped Gauss-Newton (Levenberg-Marquardt)
 * solver with a finite-difference Jacobian, the Ramsey decay fits built on
 * it, and the closed-form straight line used for W_min versus r.
 */

#ifndef QWIGNER_FITTING_HPP
#define QWIGNER_FITTING_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qwigner {

struct FitParameter {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;  ///< NaN when the data cannot determine it
};

/// Only ever returned for converged fits; failures throw.
struct FitResult {
  std::vector<FitParameter> parameters;
  Eigen::MatrixXd covariance;
  double residual_norm = 0.0;  ///< sqrt of the weighted residual sum of squares
  std::size_t degrees_of_freedom = 0;
  std::size_t iterations = 0;
  bool converged = false;

  const FitParameter& parameter(const std::string& name) const;
  double value(const std::string& name) const { return parameter(name).value; }
  double std_error(const std::string& name) const { return parameter(name).std_error; }
};

struct LeastSquaresOptions {
  std::size_t max_iterations = 200;
  double step_tolerance = 1e-10;  ///< relative
  /// Multiply the covariance by chi^2 / dof. Use when weights are relative
  /// rather than true inverse variances.
  bool scale_covariance = false;
};

/// Model value at abscissa t for parameter vector p.
using Model = std::function<double(double t, const Eigen::VectorXd& p)>;

/// Minimizes sum_i w_i (y_i - model(t_i, p))^2 from `start`.
/// Throws NumericalError when it does not converge within max_iterations and
/// DomainError for a rank-deficient problem.
FitResult levenberg_marquardt(const Model& model, const Eigen::VectorXd& start, std::span<const double> t,
                              std::span<const double> y, std::span<const double> w,
                              const std::vector<std::string>& names, const LeastSquaresOptions& opts = {});

struct DecaySample {
  double t_ms = 0.0;
  double amplitude = 0.0;
  double weight = 1.0;  ///< inverse variance
};

enum class DecayFitMode {
  Envelope,    ///< A exp(-t/T)
  FullFringe,  ///< A exp(-t/T) cos(Delta t + phi0) + c
};

enum class Weighting { InverseVariance, Unweighted };

/// Parameters are named "A", "T" and, for full fringes, "Delta", "phi0", "c".
FitResult fit_exponential_decay(std::span<const DecaySample> samples, DecayFitMode mode,
                                Weighting weighting = Weighting::InverseVariance);

struct LinePoint {
  double r = 0.0;
  double w_min = 0.0;
  double error = 0.0;  ///< standard error of w_min; 0 for exact points
};

/// Weighted straight line w = slope r + intercept with zero crossing
/// r* = -intercept / slope. Parameters "slope", "intercept", "crossing".
/// Inverse-variance weights are used when every point carries a positive
/// error; otherwise the fit is unweighted with residual-scaled errors.
FitResult fit_wmin_line(std::span<const LinePoint> points);

}  // namespace qwigner

#endif  // QWIGNER_FITTING_HPP
