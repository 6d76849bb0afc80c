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

// Brute-force reference solvers. None of these share code paths with the
// library routines they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace noc3d::oracle {

// max c'x s.t. A x <= b, x >= 0 by enumerating every vertex (n <= 3).
inline double lp_by_vertices(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                             const std::vector<double>& c) {
  const std::size_t m = a.size(), n = c.size();
  // all constraints as g.x <= h, including -x_i <= 0
  std::vector<std::vector<double>> g = a;
  std::vector<double> h = b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(n, 0.0);
    row[i] = -1.0;
    g.push_back(row);
    h.push_back(0.0);
  }
  const std::size_t total = m + n;
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<double> mat(n * n), rhs(n);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) mat[r * n + k] = g[pick[r]][k];
        rhs[r] = h[pick[r]];
      }
      // Cramer-free elimination
      for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t r = k + 1; r < n; ++r)
          if (std::abs(mat[r * n + k]) > std::abs(mat[p * n + k])) p = r;
        if (std::abs(mat[p * n + k]) < 1e-12) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(mat[k * n + j], mat[p * n + j]);
        std::swap(rhs[k], rhs[p]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == k) continue;
          const double f = mat[r * n + k] / mat[k * n + k];
          for (std::size_t j = 0; j < n; ++j) mat[r * n + j] -= f * mat[k * n + j];
          rhs[r] -= f * rhs[k];
        }
      }
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = rhs[k] / mat[k * n + k];
      for (std::size_t r = 0; r < total; ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += g[r][k] * x[k];
        if (s > h[r] + 1e-9) return;
      }
      double obj = 0.0;
      for (std::size_t k = 0; k < n; ++k) obj += c[k] * x[k];
      best = std::max(best, obj);
      return;
    }
    for (std::size_t i = start; i < total; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Ternary search of a convex function on [lo, hi].
inline double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return f((lo + hi) / 2.0);
}

// Minimum bounding area of a grid with <= 3 used rows. Fixing the first used
// row height to 1 (scale invariance), the optimal widths are
// W_c = max_r a_rc / H_r and log-area is convex in the remaining log-heights.
inline double min_area_by_search(const std::vector<std::vector<double>>& demand) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : demand)
    if (std::any_of(r.begin(), r.end(), [](double a) { return a > 0.0; })) rows.push_back(r);
  if (rows.empty()) return 0.0;
  const std::size_t cols = rows.front().size();
  auto log_area = [&](const std::vector<double>& y) {
    double sw = 0.0, sh = 0.0;
    for (double v : y) sh += std::exp(v);
    for (std::size_t c = 0; c < cols; ++c) {
      double w = 0.0;
      for (std::size_t r = 0; r < rows.size(); ++r) w = std::max(w, rows[r][c] * std::exp(-y[r]));
      sw += w;
    }
    return std::log(sw * sh);
  };
  const double span = 12.0;
  if (rows.size() == 1) return std::exp(log_area({0.0}));
  if (rows.size() == 2)
    return std::exp(ternary_min([&](double u) { return log_area({0.0, u}); }, -span, span));
  if (rows.size() == 3)
    return std::exp(ternary_min(
        [&](double u) { return ternary_min([&](double v) { return log_area({0.0, u, v}); }, -span, span, 120); },
        -span, span, 120));
  return std::numeric_limits<double>::quiet_NaN();
}

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;
};

// All-pairs shortest lengths; infinity where unreachable.
inline std::vector<std::vector<double>> floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& e : edges) d[e.from][e.to] = std::min(d[e.from][e.to], e.length);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// Calls fn(choice) for every vector in prod_i [0, sizes[i]).
inline void for_each_choice(const std::vector<std::size_t>& sizes, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> choice(sizes.size(), 0);
  for (std::size_t s : sizes)
    if (s == 0) return;
  while (true) {
    fn(choice);
    std::size_t i = 0;
    while (i < sizes.size() && ++choice[i] == sizes[i]) choice[i++] = 0;
    if (i == sizes.size()) return;
  }
}

// Every k-subset of {0..n-1}, in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace noc3d::oracle
