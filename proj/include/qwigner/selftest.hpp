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

#ifndef QWIGNER_SELFTEST_HPP
#define QWIGNER_SELFTEST_HPP

#include <functional>
#include <string>
#include <vector>

#include "qwigner/qubit.hpp"
#include "qwigner/random.hpp"
#include "qwigner/wigner.hpp"

namespace qwigner {

/// Uniform direction; r uniform in [0, 1] unless `pure`.
BlochStated random_bloch_state(RandomStream& rng, bool pure = false);

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  /// Phase-point kernel under test. Replaceable so that a broken kernel can
  /// be shown to trip the suite.
  std::function<ComplexMatrix2d(const PhasePointd&)> kernel = [](const PhasePointd& p) { return qwigner::kernel(p); };
  std::uint64_t seed = 20260101;
};

/// Fast invariants: path equivalence, normalization, pure-state minimum and
/// the negativity threshold.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options);
std::vector<SelftestCheck> run_selftest();

}  // namespace qwigner

#endif  // QWIGNER_SELFTEST_HPP
