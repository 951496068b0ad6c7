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
 * @file qubit.hpp
 * Exact 2x2 complex algebra for a single qubit: density matrices, Bloch
 * coordinates, Pauli operators, SU(2) rotations and state metrics.
 *
 * Every type is templated on the real scalar so that the same code can be
 * instantiated for double (the default everywhere in the toolkit) or long
 * double when extra headroom is wanted in reference computations.
 */

#ifndef QWIGNER_QUBIT_HPP
#define QWIGNER_QUBIT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qwigner/errors.hpp"

namespace qwigner {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using ComplexMatrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Module-wide tolerances. Algebraic identities are held to `algebraic`;
/// anything that goes through trig/inverse-trig round trips to `roundtrip`.
template <typename Scalar>
struct Tolerance {
  static constexpr Scalar algebraic = Scalar(1e-12);
  static constexpr Scalar roundtrip = Scalar(1e-10);
  /// Below this Bloch radius the direction angles are meaningless.
  static constexpr Scalar degenerate_radius = Scalar(1e-12);
};

/// Entrywise comparison with an explicit absolute tolerance.
template <typename Scalar>
bool approx_equal(const ComplexMatrix2<Scalar>& a, const ComplexMatrix2<Scalar>& b,
                  Scalar tol = Tolerance<Scalar>::algebraic) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

template <typename Scalar>
ComplexMatrix2<Scalar> identity2() {
  return ComplexMatrix2<Scalar>::Identity();
}

template <typename Scalar>
ComplexMatrix2<Scalar> pauli_x() {
  ComplexMatrix2<Scalar> m;
  m << Scalar(0), Scalar(1), Scalar(1), Scalar(0);
  return m;
}

template <typename Scalar>
ComplexMatrix2<Scalar> pauli_y() {
  const Complex<Scalar> i(Scalar(0), Scalar(1));
  ComplexMatrix2<Scalar> m;
  m << Scalar(0), -i, i, Scalar(0);
  return m;
}

template <typename Scalar>
ComplexMatrix2<Scalar> pauli_z() {
  ComplexMatrix2<Scalar> m;
  m << Scalar(1), Scalar(0), Scalar(0), Scalar(-1);
  return m;
}

/// Polar coordinates of a state in the Bloch ball.
template <typename Scalar>
struct BlochState {
  Scalar theta{0};  ///< polar angle, [0, pi]
  Scalar phi{0};    ///< azimuth, [0, 2pi)
  Scalar r{0};      ///< Bloch radius, [0, 1]

  Scalar purity() const { return (Scalar(1) + r * r) / Scalar(2); }

  /// Throws DomainError if the coordinates leave the Bloch ball parametrization.
  void validate(Scalar tol = Tolerance<Scalar>::algebraic) const {
    using std::isfinite;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    if (!isfinite(theta) || !isfinite(phi) || !isfinite(r))
      throw DomainError("BlochState: non-finite coordinate");
    if (r < -tol || r > Scalar(1) + tol)
      throw DomainError("BlochState: r must lie in [0, 1]");
    if (theta < -tol || theta > pi + tol)
      throw DomainError("BlochState: theta must lie in [0, pi]");
    if (phi < -tol || phi >= Scalar(2) * pi + tol)
      throw DomainError("BlochState: phi must lie in [0, 2pi)");
  }
};

/// Cartesian Bloch vector r * (sin t cos p, sin t sin p, cos t).
template <typename Scalar>
Vector3<Scalar> bloch_vector(const BlochState<Scalar>& s) {
  using std::cos;
  using std::sin;
  return Vector3<Scalar>(s.r * sin(s.theta) * cos(s.phi), s.r * sin(s.theta) * sin(s.phi),
                         s.r * cos(s.theta));
}

/// 2x2 unitary. Two unitaries that differ by a global phase describe the same
/// rotation, so compare them with same_action() rather than entrywise.
template <typename Scalar>
class UnitaryMatrix {
 public:
  using Matrix = ComplexMatrix2<Scalar>;

  UnitaryMatrix() : m_(Matrix::Identity()) {}

  static UnitaryMatrix from_matrix(const Matrix& m, Scalar tol = Tolerance<Scalar>::algebraic) {
    if (!approx_equal<Scalar>(m * m.adjoint(), Matrix::Identity(), tol))
      throw DomainError("UnitaryMatrix: U U^dagger differs from identity");
    return UnitaryMatrix(m, Trusted{});
  }

  const Matrix& matrix() const noexcept { return m_; }
  UnitaryMatrix adjoint() const { return UnitaryMatrix(m_.adjoint(), Trusted{}); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return UnitaryMatrix(a.m_ * b.m_, Trusted{});
  }

  /// U A U^dagger
  Matrix conjugate(const Matrix& a) const { return m_ * a * m_.adjoint(); }

 private:
  struct Trusted {};
  UnitaryMatrix(const Matrix& m, Trusted) : m_(m) {}

  template <typename S>
  friend UnitaryMatrix<S> rotation_z(S);
  template <typename S>
  friend UnitaryMatrix<S> rotation_x(S);
  template <typename S>
  friend UnitaryMatrix<S> rotation_y(S);

  Matrix m_;
};

/// True when both unitaries conjugate every Pauli operator identically.
template <typename Scalar>
bool same_action(const UnitaryMatrix<Scalar>& a, const UnitaryMatrix<Scalar>& b,
                 Scalar tol = Tolerance<Scalar>::algebraic) {
  for (const auto& p : {pauli_x<Scalar>(), pauli_y<Scalar>(), pauli_z<Scalar>()}) {
    if (!approx_equal<Scalar>(a.conjugate(p), b.conjugate(p), tol)) return false;
  }
  return true;
}

/// exp(-i xi/2 sigma_z)
template <typename Scalar>
UnitaryMatrix<Scalar> rotation_z(Scalar xi) {
  using std::cos;
  using std::sin;
  const Scalar h = xi / Scalar(2);
  ComplexMatrix2<Scalar> m;
  m << Complex<Scalar>(cos(h), -sin(h)), Scalar(0), Scalar(0), Complex<Scalar>(cos(h), sin(h));
  return UnitaryMatrix<Scalar>(m, typename UnitaryMatrix<Scalar>::Trusted{});
}

/// exp(-i chi/2 sigma_x)
template <typename Scalar>
UnitaryMatrix<Scalar> rotation_x(Scalar chi) {
  using std::cos;
  using std::sin;
  const Scalar h = chi / Scalar(2);
  const Complex<Scalar> c(cos(h), Scalar(0));
  const Complex<Scalar> s(Scalar(0), -sin(h));
  ComplexMatrix2<Scalar> m;
  m << c, s, s, c;
  return UnitaryMatrix<Scalar>(m, typename UnitaryMatrix<Scalar>::Trusted{});
}

/// exp(-i angle/2 sigma_y)
template <typename Scalar>
UnitaryMatrix<Scalar> rotation_y(Scalar angle) {
  using std::cos;
  using std::sin;
  const Scalar h = angle / Scalar(2);
  ComplexMatrix2<Scalar> m;
  m << cos(h), -sin(h), sin(h), cos(h);
  return UnitaryMatrix<Scalar>(m, typename UnitaryMatrix<Scalar>::Trusted{});
}

/// R_z(xi) R_x(chi) R_z(Xi): the displacement used by the phase-space kernel.
template <typename Scalar>
UnitaryMatrix<Scalar> euler_rotation(Scalar xi, Scalar chi, Scalar Xi) {
  return rotation_z(xi) * rotation_x(chi) * rotation_z(Xi);
}

/// Hermitian, unit-trace, positive semidefinite 2x2 matrix.
///
/// from_matrix() validates strictly. from_estimate() is for noisy
/// reconstructions: it symmetrizes and renormalizes the trace first, and only
/// then checks positivity.
template <typename Scalar>
class DensityMatrix {
 public:
  using Matrix = ComplexMatrix2<Scalar>;

  /// |0><0|
  DensityMatrix() { m_ << Scalar(1), Scalar(0), Scalar(0), Scalar(0); }

  static DensityMatrix from_matrix(const Matrix& m, Scalar tol = Tolerance<Scalar>::algebraic) {
    using std::abs;
    if (abs(m(1, 0) - std::conj(m(0, 1))) > tol || abs(m(0, 0).imag()) > tol ||
        abs(m(1, 1).imag()) > tol)
      throw DomainError("DensityMatrix: matrix is not Hermitian");
    if (abs((m(0, 0) + m(1, 1)).real() - Scalar(1)) > tol)
      throw DomainError("DensityMatrix: trace differs from 1");
    check_positive(m, tol);
    return DensityMatrix(m, Trusted{});
  }

  static DensityMatrix from_estimate(const Matrix& raw, Scalar tol = Tolerance<Scalar>::algebraic) {
    Matrix m = (raw + raw.adjoint()) / Scalar(2);
    const Scalar tr = (m(0, 0) + m(1, 1)).real();
    if (!(tr > Scalar(0))) throw DomainError("DensityMatrix: estimate has non-positive trace");
    m /= tr;
    check_positive(m, tol);
    return DensityMatrix(m, Trusted{});
  }

  static DensityMatrix maximally_mixed() {
    return DensityMatrix(Matrix::Identity() / Scalar(2), Trusted{});
  }

  /// Builds 1/2 (I + v.sigma). The caller guarantees |v| <= 1.
  static DensityMatrix from_bloch_vector(const Vector3<Scalar>& v) {
    if (v.norm() > Scalar(1) + Tolerance<Scalar>::algebraic)
      throw DomainError("DensityMatrix: Bloch vector longer than 1");
    const Matrix m = (identity2<Scalar>() + v.x() * pauli_x<Scalar>() + v.y() * pauli_y<Scalar>() +
                      v.z() * pauli_z<Scalar>()) /
                     Scalar(2);
    return DensityMatrix(m, Trusted{});
  }

  const Matrix& matrix() const noexcept { return m_; }
  Complex<Scalar> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// (2 Re rho12, -2 Im rho12, rho11 - rho22)
  Vector3<Scalar> bloch_vector() const {
    return Vector3<Scalar>(Scalar(2) * m_(0, 1).real(), Scalar(-2) * m_(0, 1).imag(),
                           (m_(0, 0) - m_(1, 1)).real());
  }

  Scalar determinant() const { return m_.determinant().real(); }

  /// Mixture weight*this + (1-weight)*other.
  DensityMatrix mix(const DensityMatrix& other, Scalar weight) const {
    return DensityMatrix(weight * m_ + (Scalar(1) - weight) * other.m_, Trusted{});
  }

 private:
  struct Trusted {};
  DensityMatrix(const Matrix& m, Trusted) : m_(m) {}

  static void check_positive(const Matrix& m, Scalar tol) {
    if (m(0, 0).real() < -tol || m(1, 1).real() < -tol || m.determinant().real() < -tol)
      throw DomainError("DensityMatrix: matrix is not positive semidefinite");
  }

  template <typename S>
  friend DensityMatrix<S> conjugate_state(const DensityMatrix<S>&, const UnitaryMatrix<S>&);
  template <typename S>
  friend DensityMatrix<S> with_offdiagonal(const DensityMatrix<S>&, Complex<S>);

  Matrix m_;
};

/// Same diagonal, new rho12 (rho21 follows by conjugation). The caller keeps
/// |rho12|^2 <= rho11 rho22, which holds for phase shifts and damping.
template <typename Scalar>
DensityMatrix<Scalar> with_offdiagonal(const DensityMatrix<Scalar>& rho, Complex<Scalar> rho12) {
  auto m = rho.matrix();
  m(0, 1) = rho12;
  m(1, 0) = std::conj(rho12);
  return DensityMatrix<Scalar>(m, typename DensityMatrix<Scalar>::Trusted{});
}

/// 1/2 [[1 + r cos t, r sin t e^{-i p}], [r sin t e^{i p}, 1 - r cos t]]
template <typename Scalar>
DensityMatrix<Scalar> density_from_bloch(const BlochState<Scalar>& state) {
  state.validate();
  BlochState<Scalar> s = state;
  s.r = std::clamp(s.r, Scalar(0), Scalar(1));
  return DensityMatrix<Scalar>::from_bloch_vector(bloch_vector(s));
}

/// Inverse of density_from_bloch. At the origin (r below
/// Tolerance::degenerate_radius) the angles carry no information and are
/// reported as zero.
template <typename Scalar>
BlochState<Scalar> bloch_from_density(const DensityMatrix<Scalar>& rho) {
  using std::acos;
  using std::atan2;
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Vector3<Scalar> v = rho.bloch_vector();
  BlochState<Scalar> s;
  s.r = std::min(v.norm(), Scalar(1));
  if (v.norm() <= Tolerance<Scalar>::degenerate_radius) return BlochState<Scalar>{0, 0, s.r};
  s.theta = acos(std::clamp(v.z() / v.norm(), Scalar(-1), Scalar(1)));
  Scalar phi = atan2(v.y(), v.x());
  if (phi < Scalar(0)) phi += two_pi;
  if (phi >= two_pi) phi = Scalar(0);
  s.phi = phi;
  return s;
}

/// tr(rho^2) = (1 + r^2) / 2
template <typename Scalar>
Scalar purity(const DensityMatrix<Scalar>& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

/// U rho U^dagger
template <typename Scalar>
DensityMatrix<Scalar> conjugate_state(const DensityMatrix<Scalar>& rho, const UnitaryMatrix<Scalar>& u) {
  typename DensityMatrix<Scalar>::Matrix m = u.conjugate(rho.matrix());
  // Restore exact Hermiticity lost to rounding.
  m = (m + m.adjoint()).eval() / Scalar(2);
  return DensityMatrix<Scalar>(m, typename DensityMatrix<Scalar>::Trusted{});
}

/// Uhlmann fidelity in its squared convention. For qubits
/// F = tr(rho1 rho2) + 2 sqrt(det rho1 det rho2).
template <typename Scalar>
Scalar fidelity(const DensityMatrix<Scalar>& a, const DensityMatrix<Scalar>& b) {
  using std::sqrt;
  const Scalar overlap = (a.matrix() * b.matrix()).trace().real();
  const Scalar det_a = std::max(a.determinant(), Scalar(0));
  const Scalar det_b = std::max(b.determinant(), Scalar(0));
  return std::clamp(overlap + Scalar(2) * sqrt(det_a * det_b), Scalar(0), Scalar(1));
}

/// Half the trace norm of the difference, equal to half the Euclidean
/// distance between Bloch vectors.
template <typename Scalar>
Scalar trace_distance(const DensityMatrix<Scalar>& a, const DensityMatrix<Scalar>& b) {
  return (a.bloch_vector() - b.bloch_vector()).norm() / Scalar(2);
}

using DensityMatrixd = DensityMatrix<double>;
using BlochStated = BlochState<double>;
using UnitaryMatrixd = UnitaryMatrix<double>;
using ComplexMatrix2d = ComplexMatrix2<double>;

}  // namespace qwigner

#endif  // QWIGNER_QUBIT_HPP
