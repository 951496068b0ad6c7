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

#ifndef QWIGNER_NELDER_MEAD_HPP
#define QWIGNER_NELDER_MEAD_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstddef>

namespace qwigner {

template <typename Scalar>
struct SimplexResult {
  Eigen::Matrix<Scalar, 2, 1> x;
  Scalar value;
  std::size_t iterations;
};

/// Downhill simplex in two variables, standard coefficients
/// (reflect 1, expand 2, contract 1/2, shrink 1/2).
template <typename Scalar, typename F>
SimplexResult<Scalar> nelder_mead_2d(F&& f, const Eigen::Matrix<Scalar, 2, 1>& start, Scalar step,
                                     Scalar x_tol = Scalar(1e-12), std::size_t max_iter = 2000) {
  using Point = Eigen::Matrix<Scalar, 2, 1>;
  std::array<Point, 3> p{start, start + Point(step, 0), start + Point(0, step)};
  std::array<Scalar, 3> v{f(p[0]), f(p[1]), f(p[2])};

  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    // order: best, middle, worst
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::array<Point, 3> ps{p[idx[0]], p[idx[1]], p[idx[2]]};
    std::array<Scalar, 3> vs{v[idx[0]], v[idx[1]], v[idx[2]]};
    p = ps;
    v = vs;

    const Scalar size = std::max((p[1] - p[0]).norm(), (p[2] - p[0]).norm());
    if (size < x_tol) break;

    const Point centroid = (p[0] + p[1]) / Scalar(2);
    const Point reflected = centroid + (centroid - p[2]);
    const Scalar fr = f(reflected);
    if (fr < v[0]) {
      const Point expanded = centroid + Scalar(2) * (centroid - p[2]);
      const Scalar fe = f(expanded);
      if (fe < fr) {
        p[2] = expanded;
        v[2] = fe;
      } else {
        p[2] = reflected;
        v[2] = fr;
      }
      continue;
    }
    if (fr < v[1]) {
      p[2] = reflected;
      v[2] = fr;
      continue;
    }
    const bool outside = fr < v[2];
    const Point contracted =
        outside ? Point(centroid + (reflected - centroid) / Scalar(2)) : Point(centroid + (p[2] - centroid) / Scalar(2));
    const Scalar fc = f(contracted);
    if (fc < std::min(fr, v[2])) {
      p[2] = contracted;
      v[2] = fc;
      continue;
    }
    for (int k = 1; k < 3; ++k) {
      p[k] = p[0] + (p[k] - p[0]) / Scalar(2);
      v[k] = f(p[k]);
    }
  }
  const auto best = std::min_element(v.begin(), v.end()) - v.begin();
  return {p[best], v[best], iter};
}

}  // namespace qwigner

#endif  // QWIGNER_NELDER_MEAD_HPP
