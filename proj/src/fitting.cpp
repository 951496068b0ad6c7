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

#include "qwigner/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "qwigner/errors.hpp"

namespace qwigner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd residuals(const Model& model, const Eigen::VectorXd& p, std::span<const double> t,
                          std::span<const double> y, const Eigen::VectorXd& sqrt_w) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    r[k] = sqrt_w[k] * (y[i] - model(t[i], p));
  }
  return r;
}

// Central differences, step scaled to each parameter's magnitude.
Eigen::MatrixXd jacobian(const Model& model, const Eigen::VectorXd& p, std::span<const double> t,
                         std::span<const double> y, const Eigen::VectorXd& sqrt_w) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Eigen::MatrixXd J(static_cast<Eigen::Index>(t.size()), p.size());
  for (Eigen::Index j = 0; j < p.size(); ++j) {
    const double h = base * std::max(std::abs(p[j]), 1e-3);
    Eigen::VectorXd hi = p, lo = p;
    hi[j] += h;
    lo[j] -= h;
    J.col(j) = (residuals(model, hi, t, y, sqrt_w) - residuals(model, lo, t, y, sqrt_w)) / (hi[j] - lo[j]);
  }
  return J;
}

std::size_t distinct_count(std::span<const double> xs) { return std::set<double>(xs.begin(), xs.end()).size(); }

}  // namespace

const FitParameter& FitResult::parameter(const std::string& name) const {
  for (const auto& p : parameters)
    if (p.name == name) return p;
  throw DomainError("FitResult: no parameter named '" + name + "'");
}

FitResult levenberg_marquardt(const Model& model, const Eigen::VectorXd& start, std::span<const double> t,
                              std::span<const double> y, std::span<const double> w,
                              const std::vector<std::string>& names, const LeastSquaresOptions& opts) {
  const std::size_t n = t.size();
  const auto np = static_cast<std::size_t>(start.size());
  if (y.size() != n || w.size() != n || names.size() != np)
    throw DomainError("levenberg_marquardt: inconsistent input sizes");
  if (n < np) throw DomainError("levenberg_marquardt: fewer samples than parameters");

  Eigen::VectorXd sqrt_w(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) throw DomainError("levenberg_marquardt: weights must be positive");
    sqrt_w[static_cast<Eigen::Index>(i)] = std::sqrt(w[i]);
  }

  Eigen::VectorXd p = start;
  Eigen::VectorXd r = residuals(model, p, t, y, sqrt_w);
  double cost = r.squaredNorm();
  if (!std::isfinite(cost)) throw DomainError("levenberg_marquardt: model not finite at the start point");

  double lambda = 1e-3;
  bool converged = false;
  std::size_t iter = 0;
  Eigen::MatrixXd J = jacobian(model, p, t, y, sqrt_w);
  while (iter < opts.max_iterations && !converged) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    Eigen::VectorXd d = A.diagonal().cwiseSqrt();
    if ((d.array() == 0.0).any()) throw DomainError("levenberg_marquardt: a parameter has no effect on the model");

    while (iter < opts.max_iterations) {
      ++iter;
      Eigen::MatrixXd damped = A;
      damped.diagonal() += lambda * A.diagonal();
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      // Step test in the column-scaled norm, which is invariant to rescaling
      // any single parameter.
      if ((d.cwiseProduct(step)).norm() <= opts.step_tolerance * ((d.cwiseProduct(p)).norm() + opts.step_tolerance)) {
        converged = true;
        break;
      }
      const Eigen::VectorXd trial = p + step;
      const Eigen::VectorXd r_trial = residuals(model, trial, t, y, sqrt_w);
      const double cost_trial = r_trial.squaredNorm();
      if (std::isfinite(cost_trial) && cost_trial < cost) {
        p = trial;
        r = r_trial;
        cost = cost_trial;
        lambda = std::max(lambda / 10.0, 1e-12);
        J = jacobian(model, p, t, y, sqrt_w);
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No descent direction left at working precision.
        converged = true;
        break;
      }
    }
  }
  if (!converged) throw NumericalError("levenberg_marquardt: no convergence after " + std::to_string(iter) + " iterations");

  const Eigen::MatrixXd A = J.transpose() * J;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const double max_ev = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (!(eig.eigenvalues().minCoeff() > max_ev * 1e-14))
    throw DomainError("levenberg_marquardt: degenerate design, parameters not identifiable");

  FitResult fit;
  fit.covariance = A.inverse();
  fit.degrees_of_freedom = n - np;
  fit.residual_norm = std::sqrt(cost);
  if (opts.scale_covariance) {
    fit.covariance *= fit.degrees_of_freedom > 0 ? cost / static_cast<double>(fit.degrees_of_freedom) : kNaN;
  }
  fit.iterations = iter;
  fit.converged = true;
  for (std::size_t j = 0; j < np; ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    fit.parameters.push_back({names[j], p[k], std::sqrt(fit.covariance(k, k))});
  }
  return fit;
}

namespace {

void validate_samples(std::span<const DecaySample> samples, Weighting weighting) {
  std::vector<double> ts;
  for (const auto& s : samples) {
    if (!std::isfinite(s.t_ms) || !std::isfinite(s.amplitude) || s.t_ms < 0.0)
      throw DomainError("fit_exponential_decay: samples must be finite with t >= 0");
    if (weighting == Weighting::InverseVariance && !(s.weight > 0.0 && std::isfinite(s.weight)))
      throw DomainError("fit_exponential_decay: inverse-variance weights must be positive");
    ts.push_back(s.t_ms);
  }
  if (distinct_count(ts) < 3) throw DomainError("fit_exponential_decay: need at least 3 distinct times");
}

struct Columns {
  std::vector<double> t, y, w;
};

Columns columns(std::span<const DecaySample> samples, Weighting weighting) {
  Columns c;
  for (const auto& s : samples) {
    c.t.push_back(s.t_ms);
    c.y.push_back(s.amplitude);
    c.w.push_back(weighting == Weighting::InverseVariance ? s.weight : 1.0);
  }
  return c;
}

void check_decay_time(double T, double span) {
  if (!(T > 0.0) || !std::isfinite(T) || T > 1e4 * span)
    throw NumericalError("fit_exponential_decay: data show no resolvable decay (T -> infinity)");
}

FitResult fit_envelope(const Columns& c, Weighting weighting) {
  // Start from a weighted log-linear fit on the positive amplitudes.
  double sw = 0, st = 0, sl = 0, stt = 0, stl = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    if (!(c.y[i] > 0.0)) continue;
    const double wl = c.w[i] * c.y[i] * c.y[i];
    const double l = std::log(c.y[i]);
    sw += wl;
    st += wl * c.t[i];
    sl += wl * l;
    stt += wl * c.t[i] * c.t[i];
    stl += wl * c.t[i] * l;
    ++used;
  }
  if (used < 2) throw DomainError("fit_exponential_decay: envelope mode needs positive amplitudes");
  const double denom = sw * stt - st * st;
  if (!(denom > 0.0)) throw DomainError("fit_exponential_decay: degenerate design");
  const double slope = (sw * stl - st * sl) / denom;
  const double intercept = (sl - slope * st) / sw;
  const double span = *std::max_element(c.t.begin(), c.t.end()) - *std::min_element(c.t.begin(), c.t.end());
  if (!(slope < 0.0)) throw NumericalError("fit_exponential_decay: data show no decay (T -> infinity)");
  check_decay_time(-1.0 / slope, span);

  const Model model = [](double t, const Eigen::VectorXd& p) { return p[0] * std::exp(-t / p[1]); };
  Eigen::VectorXd start(2);
  start << std::exp(intercept), -1.0 / slope;
  LeastSquaresOptions opts;
  opts.scale_covariance = weighting == Weighting::Unweighted;
  FitResult fit = levenberg_marquardt(model, start, c.t, c.y, c.w, {"A", "T"}, opts);
  check_decay_time(fit.value("T"), span);
  return fit;
}

// Linear least squares for (a, b, c) in exp(-t/T)(a cos Dt + b sin Dt) + c.
struct LinearFringe {
  Eigen::Vector3d coef;
  double rss;
};

LinearFringe solve_linear_fringe(const Columns& c, double T, double D) {
  Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double e = std::exp(-c.t[i] / T);
    const Eigen::Vector3d x(e * std::cos(D * c.t[i]), e * std::sin(D * c.t[i]), 1.0);
    A += c.w[i] * x * x.transpose();
    b += c.w[i] * c.y[i] * x;
  }
  LinearFringe out{A.ldlt().solve(b), 0.0};
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    const double e = std::exp(-c.t[i] / T);
    const double f = e * (out.coef[0] * std::cos(D * c.t[i]) + out.coef[1] * std::sin(D * c.t[i])) + out.coef[2];
    out.rss += c.w[i] * (c.y[i] - f) * (c.y[i] - f);
  }
  return out;
}

FitResult fit_full_fringe(const Columns& c, Weighting weighting) {
  if (c.t.size() < 5) throw DomainError("fit_exponential_decay: full-fringe mode needs at least 5 samples");
  std::vector<double> ts = c.t;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  const double span = ts.back() - ts.front();
  double min_gap = span;
  for (std::size_t i = 1; i < ts.size(); ++i) min_gap = std::min(min_gap, ts[i] - ts[i - 1]);

  // Coarse search over (Delta, T); the linear parameters are solved exactly.
  constexpr double pi = std::numbers::pi;
  const double d_lo = pi / span;
  const double d_hi = pi / min_gap;
  constexpr int kDeltaSteps = 600;
  constexpr int kTauSteps = 30;
  double best_rss = std::numeric_limits<double>::infinity();
  double best_T = span, best_D = d_lo;
  LinearFringe best_lin{};
  for (int k = 0; k < kDeltaSteps; ++k) {
    const double D = d_lo + (d_hi - d_lo) * k / (kDeltaSteps - 1);
    for (int m = 0; m < kTauSteps; ++m) {
      const double T = span * std::pow(10.0, -1.0 + 2.5 * m / (kTauSteps - 1));
      const auto lin = solve_linear_fringe(c, T, D);
      if (lin.rss < best_rss) {
        best_rss = lin.rss;
        best_T = T;
        best_D = D;
        best_lin = lin;
      }
    }
  }
  const double A0 = std::hypot(best_lin.coef[0], best_lin.coef[1]);
  if (!(A0 > 0.0)) throw NumericalError("fit_exponential_decay: no oscillation found");
  const double phi0 = std::atan2(-best_lin.coef[1], best_lin.coef[0]);

  const Model model = [](double t, const Eigen::VectorXd& p) {
    return p[0] * std::exp(-t / p[1]) * std::cos(p[2] * t + p[3]) + p[4];
  };
  Eigen::VectorXd start(5);
  start << A0, best_T, best_D, phi0, best_lin.coef[2];
  LeastSquaresOptions opts;
  opts.scale_covariance = weighting == Weighting::Unweighted;
  FitResult fit = levenberg_marquardt(model, start, c.t, c.y, c.w, {"A", "T", "Delta", "phi0", "c"}, opts);

  // Canonical sign: A > 0, Delta > 0, phi0 in (-pi, pi].
  auto& A = fit.parameters[0].value;
  auto& D = fit.parameters[2].value;
  auto& ph = fit.parameters[3].value;
  if (D < 0.0) {
    D = -D;
    ph = -ph;
  }
  if (A < 0.0) {
    A = -A;
    ph += pi;
  }
  ph = std::remainder(ph, 2.0 * pi);
  check_decay_time(fit.value("T"), span);
  return fit;
}

}  // namespace

FitResult fit_exponential_decay(std::span<const DecaySample> samples, DecayFitMode mode, Weighting weighting) {
  validate_samples(samples, weighting);
  const auto c = columns(samples, weighting);
  return mode == DecayFitMode::Envelope ? fit_envelope(c, weighting) : fit_full_fringe(c, weighting);
}

FitResult fit_wmin_line(std::span<const LinePoint> points) {
  std::vector<double> rs;
  for (const auto& p : points) {
    if (!std::isfinite(p.r) || !std::isfinite(p.w_min) || !std::isfinite(p.error) || p.error < 0.0)
      throw DomainError("fit_wmin_line: points must be finite with non-negative errors");
    rs.push_back(p.r);
  }
  if (distinct_count(rs) < 2) throw DomainError("fit_wmin_line: need at least 2 distinct r values");

  const bool weighted = std::all_of(points.begin(), points.end(), [](const LinePoint& p) { return p.error > 0.0; });
  auto weight = [&](const LinePoint& p) { return weighted ? 1.0 / (p.error * p.error) : 1.0; };

  double W = 0, r_bar = 0, y_bar = 0;
  for (const auto& p : points) {
    W += weight(p);
    r_bar += weight(p) * p.r;
    y_bar += weight(p) * p.w_min;
  }
  r_bar /= W;
  y_bar /= W;
  double sxx = 0, sxy = 0;
  for (const auto& p : points) {
    sxx += weight(p) * (p.r - r_bar) * (p.r - r_bar);
    sxy += weight(p) * (p.r - r_bar) * (p.w_min - y_bar);
  }
  const double slope = sxy / sxx;
  const double intercept = y_bar - slope * r_bar;
  if (slope == 0.0) throw NumericalError("fit_wmin_line: zero slope has no crossing");
  const double crossing = -intercept / slope;

  double rss = 0;
  for (const auto& p : points) {
    const double e = p.w_min - (slope * p.r + intercept);
    rss += weight(p) * e * e;
  }
  const std::size_t dof = points.size() - 2;
  double scale = 1.0;
  if (!weighted) scale = dof > 0 ? rss / static_cast<double>(dof) : kNaN;

  Eigen::Matrix2d cov;
  cov << 1.0 / sxx, -r_bar / sxx, -r_bar / sxx, 1.0 / W + r_bar * r_bar / sxx;
  cov *= scale;
  // crossing = -b/a, gradient (b/a^2, -1/a) in (slope, intercept)
  Eigen::Matrix<double, 3, 2> jac;
  jac << 1.0, 0.0, 0.0, 1.0, intercept / (slope * slope), -1.0 / slope;

  FitResult fit;
  fit.covariance = jac * cov * jac.transpose();
  fit.degrees_of_freedom = dof;
  fit.residual_norm = std::sqrt(rss);
  fit.converged = true;
  fit.parameters = {{"slope", slope, std::sqrt(fit.covariance(0, 0))},
                    {"intercept", intercept, std::sqrt(fit.covariance(1, 1))},
                    {"crossing", crossing, std::sqrt(fit.covariance(2, 2))}};
  return fit;
}

}  // namespace qwigner
