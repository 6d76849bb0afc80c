// Copyright 2026 The noc3d Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace noc3d {

enum class LpStatus { Optimal, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;      // primal solution
  std::vector<double> duals;  // one shadow price per row
  double objective = 0.0;
};

// Dense tableau simplex for
//
//   maximize c'x  subject to  A x <= b,  x >= 0,   with b >= 0,
//
// so the slack basis is feasible and no phase one is needed. `a` is row-major
// with rows = b.size() and cols = c.size(). Dantzig pricing; switches to
// Bland's rule after a run of degenerate pivots.
inline LpResult maximize_lp(std::span<const double> a, std::span<const double> b, std::span<const double> c,
                            std::size_t max_pivots = 50000) {
  const std::size_t m = b.size(), n = c.size();
  const std::size_t width = n + m + 1;  // structural | slack | rhs
  constexpr double kEps = 1e-12;

  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, j) = a[i * n + j];
    at(i, n + i) = 1.0;
    at(i, width - 1) = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

  LpResult res;
  std::size_t degenerate_run = 0;
  std::size_t pivots = 0;
  for (;; ++pivots) {
    if (pivots >= max_pivots) {
      res.status = LpStatus::IterationLimit;
      break;
    }
    const bool bland = degenerate_run > 50;
    std::size_t enter = width;
    double best = -kEps;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      const double rc = at(m, j);
      if (rc < -kEps && (bland ? enter == width : rc < best)) {
        enter = j;
        best = rc;
      }
    }
    if (enter == width) break;

    std::size_t leave = m;
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double coef = at(i, enter);
      if (coef <= kEps) continue;
      const double r = at(i, width - 1) / coef;
      if (r < ratio - kEps || (r <= ratio + kEps && leave < m && basis[i] < basis[leave])) {
        ratio = r;
        leave = i;
      }
    }
    if (leave == m) {
      res.status = LpStatus::Unbounded;
      return res;
    }
    degenerate_run = ratio <= kEps ? degenerate_run + 1 : 0;

    const double pivot = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= pivot;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
  }

  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = at(i, width - 1);
  res.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) res.duals[i] = std::max(0.0, at(m, n + i));
  res.objective = at(m, width - 1);
  return res;
}

}  // namespace noc3d
