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
 * @file wigner.hpp
 * Continuous Wigner function of a qubit over the Euler angles (xi, chi).
 *
 * The value at a phase point is tr[rho Delta(xi, chi)] / pi^2 where
 * Delta = (I - sqrt(3) R sigma_z R^dagger) / 2 and R = R_z(xi) R_x(chi) R_z(Xi).
 * The 1/pi^2 factor makes the function integrate to one over
 * xi in [0, pi], chi in [0, 2pi]. Three evaluation routes are provided
 * (kernel trace, closed form in Bloch coordinates, rotate-then-measure) and
 * they agree to rounding.
 */

#ifndef QWIGNER_WIGNER_HPP
#define QWIGNER_WIGNER_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "qwigner/errors.hpp"
#include "qwigner/nelder_mead.hpp"
#include "qwigner/qubit.hpp"

namespace qwigner {

template <typename Scalar>
struct WignerConstants {
  static constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  static constexpr Scalar sqrt3 = std::numbers::sqrt3_v<Scalar>;
  /// 1 / (2 pi^2), the flat value of the maximally mixed state.
  static constexpr Scalar flat = Scalar(1) / (Scalar(2) * pi * pi);
  /// Kernel eigenvalues (1 -/+ sqrt3)/2 scaled by 1/pi^2.
  static constexpr Scalar lower_bound = (Scalar(1) - sqrt3) * flat;
  static constexpr Scalar upper_bound = (Scalar(1) + sqrt3) * flat;
  /// Bloch radius below which the function is non-negative everywhere.
  static constexpr Scalar r_threshold = Scalar(1) / sqrt3;
};

/// Reduce an angle into [0, 2pi).
template <typename Scalar>
Scalar wrap_two_pi(Scalar a) {
  using std::fmod;
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar w = fmod(a, two_pi);
  if (w < Scalar(0)) w += two_pi;
  if (w >= two_pi) w = Scalar(0);
  return w;
}

template <typename Scalar>
struct PhasePoint {
  Scalar xi{0};
  Scalar chi{0};

  PhasePoint canonical() const { return {wrap_two_pi(xi), wrap_two_pi(chi)}; }
  bool finite() const { return std::isfinite(xi) && std::isfinite(chi); }
};

/// Closed interval [lo, hi] with lo < hi.
template <typename Scalar>
struct Span {
  Scalar lo{0};
  Scalar hi{0};

  void validate(const char* what) const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
      throw DomainError(std::string(what) + " span must satisfy lo < hi");
  }
};

/// Wigner values sampled on a rectangular (xi, chi) lattice.
/// values(i, j) belongs to (xi_axis[i], chi_axis[j]).
template <typename Scalar>
struct WignerGrid {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> xi_axis;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> chi_axis;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;

  /// Checks shape and the kernel-spectrum bounds (with 1e-9 slack).
  void validate() const {
    if (values.rows() != xi_axis.size() || values.cols() != chi_axis.size())
      throw DomainError("WignerGrid: values do not match axes");
    const Scalar slack = Scalar(1e-9);
    if (values.size() > 0 && (values.minCoeff() < WignerConstants<Scalar>::lower_bound - slack ||
                              values.maxCoeff() > WignerConstants<Scalar>::upper_bound + slack))
      throw DomainError("WignerGrid: value outside kernel bounds");
  }
};

template <typename Scalar>
struct NegativityReport {
  Scalar w_min{0};
  PhasePoint<Scalar> argmin;
  bool is_negative{false};
  Scalar r_threshold{WignerConstants<Scalar>::r_threshold};
};

/// Delta(xi, chi) = (I - sqrt3 R sigma_z R^dagger) / 2. The third Euler angle
/// commutes with sigma_z and drops out; it is exposed only so that property
/// can be checked.
template <typename Scalar>
ComplexMatrix2<Scalar> kernel(const PhasePoint<Scalar>& p, Scalar Xi = Scalar(0)) {
  const auto r = euler_rotation(p.xi, p.chi, Xi);
  return (identity2<Scalar>() - WignerConstants<Scalar>::sqrt3 * r.conjugate(pauli_z<Scalar>())) /
         Scalar(2);
}

/// tr[rho Delta] without the 1/pi^2 normalization (debugging aid).
template <typename Scalar>
Scalar kernel_trace(const DensityMatrix<Scalar>& rho, const PhasePoint<Scalar>& p,
                    Scalar Xi = Scalar(0)) {
  return (rho.matrix() * kernel(p, Xi)).trace().real();
}

/// Normalized Wigner value through the kernel trace.
template <typename Scalar>
Scalar wigner_value(const DensityMatrix<Scalar>& rho, const PhasePoint<Scalar>& p,
                    Scalar Xi = Scalar(0)) {
  constexpr Scalar pi = WignerConstants<Scalar>::pi;
  return kernel_trace(rho, p, Xi) / (pi * pi);
}

/// (1/2pi^2) {1 - sqrt3 r [cos t cos chi + sin(xi - p) sin t sin chi]}
template <typename Scalar>
Scalar wigner_closed_form(const BlochState<Scalar>& s, const PhasePoint<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar bracket = cos(s.theta) * cos(p.chi) + sin(p.xi - s.phi) * sin(s.theta) * sin(p.chi);
  return WignerConstants<Scalar>::flat * (Scalar(1) - WignerConstants<Scalar>::sqrt3 * s.r * bracket);
}

/// State after the two measurement rotations, R_x(-chi) R_z(-xi) rho (...)^dagger.
template <typename Scalar>
DensityMatrix<Scalar> measurement_frame_state(const DensityMatrix<Scalar>& rho,
                                              const PhasePoint<Scalar>& p) {
  return conjugate_state(rho, rotation_x(-p.chi) * rotation_z(-p.xi));
}

/// (1/2pi^2) [1 - sqrt3 (P0 - P1)] with populations read off the rotated state.
template <typename Scalar>
Scalar wigner_measurement_form(const DensityMatrix<Scalar>& rho, const PhasePoint<Scalar>& p) {
  const auto rotated = measurement_frame_state(rho, p);
  const Scalar p0 = rotated(0, 0).real();
  const Scalar p1 = rotated(1, 1).real();
  return WignerConstants<Scalar>::flat * (Scalar(1) - WignerConstants<Scalar>::sqrt3 * (p0 - p1));
}

/// Evenly spaced samples of [lo, hi], both endpoints included.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> linspace(const Span<Scalar>& s, std::size_t n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> axis(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    axis[static_cast<Eigen::Index>(i)] =
        i + 1 == n ? s.hi : s.lo + (s.hi - s.lo) * Scalar(i) / Scalar(n - 1);
  return axis;
}

template <typename Scalar>
WignerGrid<Scalar> wigner_grid(const DensityMatrix<Scalar>& rho, std::size_t n_xi, std::size_t n_chi,
                               const Span<Scalar>& xi_span, const Span<Scalar>& chi_span) {
  if (n_xi < 2 || n_chi < 2) throw DomainError("wigner_grid: need at least 2 samples per axis");
  xi_span.validate("xi");
  chi_span.validate("chi");
  WignerGrid<Scalar> g;
  g.xi_axis = linspace(xi_span, n_xi);
  g.chi_axis = linspace(chi_span, n_chi);
  g.values.resize(g.xi_axis.size(), g.chi_axis.size());
  for (Eigen::Index i = 0; i < g.xi_axis.size(); ++i)
    for (Eigen::Index j = 0; j < g.chi_axis.size(); ++j)
      g.values(i, j) = wigner_value(rho, PhasePoint<Scalar>{g.xi_axis[i], g.chi_axis[j]});
  return g;
}

namespace detail {
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> trapezoid_weights(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& axis) {
  const Eigen::Index n = axis.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Scalar h = (axis[k + 1] - axis[k]) / Scalar(2);
    w[k] += h;
    w[k + 1] += h;
  }
  return w;
}
}  // namespace detail

/// Composite trapezoid over the canonical domain xi in [0, pi], chi in [0, 2pi].
/// Summation runs row-major so the result does not depend on how the grid was filled.
template <typename Scalar>
Scalar integrate_wigner(const WignerGrid<Scalar>& g) {
  using std::abs;
  constexpr Scalar pi = WignerConstants<Scalar>::pi;
  const Scalar tol = Tolerance<Scalar>::algebraic;
  if (g.xi_axis.size() < 2 || g.chi_axis.size() < 2)
    throw DomainError("integrate_wigner: grid needs at least 2x2 samples");
  if (g.values.rows() != g.xi_axis.size() || g.values.cols() != g.chi_axis.size())
    throw DomainError("integrate_wigner: values do not match axes");
  if (abs(g.xi_axis[0]) > tol || abs(g.xi_axis[g.xi_axis.size() - 1] - pi) > tol ||
      abs(g.chi_axis[0]) > tol || abs(g.chi_axis[g.chi_axis.size() - 1] - Scalar(2) * pi) > tol)
    throw DomainError("integrate_wigner: grid must span xi in [0, pi] and chi in [0, 2pi]");
  for (Eigen::Index k = 0; k + 1 < g.xi_axis.size(); ++k)
    if (!(g.xi_axis[k + 1] > g.xi_axis[k])) throw DomainError("integrate_wigner: xi axis not increasing");
  for (Eigen::Index k = 0; k + 1 < g.chi_axis.size(); ++k)
    if (!(g.chi_axis[k + 1] > g.chi_axis[k])) throw DomainError("integrate_wigner: chi axis not increasing");

  const auto wx = detail::trapezoid_weights(g.xi_axis);
  const auto wc = detail::trapezoid_weights(g.chi_axis);
  Scalar total = 0;
  for (Eigen::Index i = 0; i < g.values.rows(); ++i) {
    Scalar row = 0;
    for (Eigen::Index j = 0; j < g.values.cols(); ++j) row += wc[j] * g.values(i, j);
    total += wx[i] * row;
  }
  return total;
}

/// (1 - sqrt3 r) / (2 pi^2): the minimum over phase space for any direction.
template <typename Scalar>
Scalar wigner_min_analytic(Scalar r) {
  if (!(r >= Scalar(0) && r <= Scalar(1))) throw DomainError("wigner_min_analytic: r must lie in [0, 1]");
  return WignerConstants<Scalar>::flat * (Scalar(1) - WignerConstants<Scalar>::sqrt3 * r);
}

/// Numerical minimum of f(xi, chi) over the torus: a resolution x resolution
/// scan of [0, 2pi)^2 picks the seed (first occurrence wins ties, row-major),
/// then a simplex search polishes it.
template <typename Scalar, typename F>
std::pair<Scalar, PhasePoint<Scalar>> locate_minimum(F&& f, std::size_t resolution) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar h = two_pi / Scalar(resolution);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  PhasePoint<Scalar> seed;
  for (std::size_t i = 0; i < resolution; ++i)
    for (std::size_t j = 0; j < resolution; ++j) {
      const PhasePoint<Scalar> p{h * Scalar(i), h * Scalar(j)};
      const Scalar v = f(p);
      if (v < best) {
        best = v;
        seed = p;
      }
    }
  using Vec = Eigen::Matrix<Scalar, 2, 1>;
  const auto refined = nelder_mead_2d<Scalar>(
      [&](const Vec& x) { return f(PhasePoint<Scalar>{x[0], x[1]}); }, Vec(seed.xi, seed.chi), h / Scalar(2));
  if (refined.value < best) return {refined.value, PhasePoint<Scalar>{refined.x[0], refined.x[1]}.canonical()};
  return {best, seed};
}

template <typename Scalar>
NegativityReport<Scalar> negativity_report(const BlochState<Scalar>& state, std::size_t grid_resolution) {
  if (grid_resolution < 64) throw DomainError("negativity_report: resolution must be at least 64");
  const auto rho = density_from_bloch(state);
  const auto [w_min, at] =
      locate_minimum<Scalar>([&](const PhasePoint<Scalar>& p) { return wigner_value(rho, p); }, grid_resolution);
  NegativityReport<Scalar> rep;
  rep.w_min = w_min;
  rep.argmin = at;
  rep.is_negative = w_min < -Tolerance<Scalar>::algebraic;
  return rep;
}

/// Bisection on r for the sign change of the located minimum along a fixed
/// direction (theta, phi). Stops when the bracket is narrower than tol.
template <typename Scalar>
Scalar negativity_threshold(Scalar theta, Scalar phi, std::size_t grid_resolution = 64,
                            Scalar tol = Scalar(1e-7)) {
  Scalar lo = 0, hi = 1;
  auto w_min = [&](Scalar r) { return negativity_report(BlochState<Scalar>{theta, phi, r}, grid_resolution).w_min; };
  if (!(w_min(lo) > 0 && w_min(hi) < 0)) throw NumericalError("negativity_threshold: no sign change on [0, 1]");
  while (hi - lo > tol) {
    const Scalar mid = (lo + hi) / Scalar(2);
    (w_min(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / Scalar(2);
}

using PhasePointd = PhasePoint<double>;
using WignerGridd = WignerGrid<double>;
using Spand = Span<double>;

}  // namespace qwigner

#endif  // QWIGNER_WIGNER_HPP
