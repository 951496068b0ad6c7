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
 * @file estimation.hpp
 * State tomography by linear inversion and percentile bootstrap intervals.
 *
 * Basis conventions. Detection only distinguishes |0> (retained) from |1>
 * (lost), i.e. it measures sigma_z. The other two Pauli bases are reached by a
 * pre-rotation U with U^dagger sigma_z U equal to the wanted operator:
 *
 *   x basis: U = R_x(pi/2) R_z(pi/2)   (z precession first)
 *   y basis: U = R_x(pi/2)
 *   z basis: U = I
 *
 * In every basis "retained" is the +1 outcome, so <sigma_i> = (n+ - n-)/n.
 */

#ifndef QWIGNER_ESTIMATION_HPP
#define QWIGNER_ESTIMATION_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "qwigner/qubit.hpp"
#include "qwigner/random.hpp"
#include "qwigner/shots.hpp"
#include "qwigner/tally.hpp"

namespace qwigner {

struct BasisTally {
  std::uint64_t n_plus = 0;   ///< retained after the basis pre-rotation
  std::uint64_t n_minus = 0;  ///< lost

  std::uint64_t total() const noexcept { return n_plus + n_minus; }
  double expectation() const;
};

struct PauliTallies {
  BasisTally x, y, z;
};

enum class PauliBasis { X, Y, Z };

/// Pre-rotation that maps the chosen Pauli observable onto sigma_z.
UnitaryMatrixd basis_rotation(PauliBasis basis);

/// One-sigma errors of the reconstructed entries.
struct EntryErrors {
  double rho11 = 0.0;
  double rho22 = 0.0;
  double re12 = 0.0;
  double im12 = 0.0;
};

struct TomographyResult {
  DensityMatrixd rho;
  BlochStated bloch;
  double purity = 0.0;
  EntryErrors entry_errors;
  Vector3<double> expectations = Vector3<double>::Zero();  ///< raw <sigma_x,y,z>
  double raw_r = 0.0;    ///< |raw Bloch vector| before clamping
  bool clamped = false;  ///< raw_r exceeded 1 and was scaled back to the sphere
};

/// rho = (I + sum <sigma_i> sigma_i) / 2 from exact expectations, with the
/// Bloch vector radially scaled to length 1 if it pokes outside the ball.
TomographyResult tomography_from_expectations(const Vector3<double>& expectations);

/// Same as above from counts; entry errors follow from binomial statistics,
/// Var<sigma_i> = (1 - <sigma_i>^2) / n. Throws DomainError on an empty basis.
TomographyResult tomography_linear_inversion(const PauliTallies& tallies);

/// Simulated counts for all three bases with `shots_per_basis` each, drawn in
/// the order x, y, z from `rng`.
PauliTallies simulate_tomography(const DensityMatrixd& rho, std::uint64_t shots_per_basis,
                                 const DetectionModel& det, RandomStream& rng,
                                 ContrastMode mode = ContrastMode::Off);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;  ///< statistic on the original tallies
};

using TallyStatistic = std::function<double(std::span<const ShotTally>)>;

/// Percentile (2.5 / 97.5) bootstrap. Every tally is resampled independently
/// with its own total and empirical retention fraction; resample i draws from
/// rng.split(i). Requires resamples >= 100.
Interval bootstrap_errors(std::span<const ShotTally> tallies, std::size_t resamples,
                          const TallyStatistic& statistic, RandomStream& rng);

/// Linear-interpolated sample quantile (type 7) of an unsorted sample.
double sample_quantile(std::vector<double> values, double q);

}  // namespace qwigner

#endif  // QWIGNER_ESTIMATION_HPP
