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

#ifndef QWIGNER_TALLY_HPP
#define QWIGNER_TALLY_HPP

#include <cstdint>

#include "qwigner/wigner.hpp"

namespace qwigner {

/// Push-out detection counts at one phase point. Retained atoms were in |0>.
struct ShotTally {
  std::uint64_t n_retained = 0;
  std::uint64_t n_lost = 0;
  PhasePointd point{};

  std::uint64_t total() const noexcept { return n_retained + n_lost; }
  /// Fraction retained; the estimate of P0.
  double p0_hat() const;
};

struct WignerEstimate {
  double value = 0.0;      ///< 1/rad^2
  double std_error = 0.0;  ///< binomial, propagated linearly
  ShotTally tally{};
};

/// value = (1/2pi^2)[1 - sqrt3 (P0 - P1)] with P1 = 1 - P0, and
/// std_error = (sqrt3/2pi^2) * 2 sqrt(P0 (1 - P0) / n).
/// Throws DomainError on an empty tally.
WignerEstimate estimate_wigner_from_tally(const ShotTally& tally);

}  // namespace qwigner

#endif  // QWIGNER_TALLY_HPP
