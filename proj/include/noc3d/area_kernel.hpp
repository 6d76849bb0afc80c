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

// Bounding-area minimization of a rectilinear mesh layer.
//
// Column i has width W_i and row j has height H_j, shared by every cell in
// that column/row. A cell with demand a_ij needs W_i * H_j >= a_ij. We want
// the smallest bounding box (sum W)(sum H).
//
// Two solvers:
//   min_area_lp     linear relaxation: each hyperbola H = a / W is replaced by
//                   tangent lines; minimizes the half-perimeter sum W + sum H.
//   min_area_exact  the true optimum. In log coordinates x = log W,
//                   y = log H the problem is
//                     min  lse(x) + lse(y)   s.t.  x_i + y_j >= log a_ij
//                   which is convex, so a log-barrier Newton method reaches
//                   the global minimum.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/model.hpp"
#include "noc3d/simplex.hpp"

namespace noc3d {

struct CellDemand {
  GridDims dims;
  std::vector<double> demand;  // row-major, mm^2, 0 for an empty cell

  double at(std::size_t row, std::size_t col) const { return demand[row * dims.cols + col]; }
};

struct AreaSolution {
  std::vector<double> col_widths;
  std::vector<double> row_heights;
  double area = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

inline double bounding_area(std::span<const double> widths, std::span<const double> heights) {
  double w = 0.0, h = 0.0;
  for (double v : widths) w += v;
  for (double v : heights) h += v;
  return w * h;
}

inline void validate(const CellDemand& d) {
  if (d.demand.size() != d.dims.cells()) throw Error(ErrorCode::InvalidParams, "demand size does not match grid");
  for (double a : d.demand)
    if (!(std::isfinite(a) && a >= 0.0)) throw Error(ErrorCode::InvalidParams, "cell demands must be finite and >= 0");
}

// Smallest uniform scale that makes every cell meet its demand, after giving
// zero-sized occupied columns/rows a positive size. Empty columns/rows are
// set to zero.
inline AreaSolution repair_feasibility(const CellDemand& d, AreaSolution s) {
  const std::size_t rows = d.dims.rows, cols = d.dims.cols;
  s.col_widths.resize(cols, 0.0);
  s.row_heights.resize(rows, 0.0);
  std::vector<bool> col_used(cols, false), row_used(rows, false);
  double max_demand = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (d.at(r, c) > 0.0) {
        col_used[c] = row_used[r] = true;
        max_demand = std::max(max_demand, d.at(r, c));
      }
  for (std::size_t c = 0; c < cols; ++c) {
    if (!col_used[c]) {
      s.col_widths[c] = 0.0;
      continue;
    }
    if (s.col_widths[c] > 0.0) continue;
    double w = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
      if (d.at(r, c) > 0.0 && s.row_heights[r] > 0.0) w = std::max(w, d.at(r, c) / s.row_heights[r]);
    s.col_widths[c] = w > 0.0 ? w : std::sqrt(max_demand);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!row_used[r]) {
      s.row_heights[r] = 0.0;
      continue;
    }
    if (s.row_heights[r] > 0.0) continue;
    double h = 0.0;
    for (std::size_t c = 0; c < cols; ++c)
      if (d.at(r, c) > 0.0) h = std::max(h, d.at(r, c) / s.col_widths[c]);
    s.row_heights[r] = h;
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (d.at(r, c) > 0.0) worst = std::max(worst, d.at(r, c) / (s.col_widths[c] * s.row_heights[r]));
  if (worst > 0.0) {
    const double k = std::sqrt(worst);
    for (double& w : s.col_widths) w *= k;
    for (double& h : s.row_heights) h *= k;
  }
  s.area = bounding_area(s.col_widths, s.row_heights);
  return s;
}

// Tangent abscissae for H = a / W, geometrically spaced over [sqrt(a)/4, 4 sqrt(a)].
inline std::vector<double> tangent_points(double a, std::size_t count) {
  std::vector<double> out(count);
  const double root = std::sqrt(a);
  for (std::size_t t = 0; t < count; ++t) {
    const double e = -1.0 + 2.0 * static_cast<double>(t) / static_cast<double>(count - 1);
    out[t] = root * std::pow(4.0, e);
  }
  return out;
}

// Linear relaxation. The returned cell products may undershoot the demands;
// `area` is (sum W)(sum H) of the raw LP point.
inline AreaSolution min_area_lp(const CellDemand& d, std::size_t tangent_count = 8) {
  validate(d);
  if (tangent_count < 2) throw Error(ErrorCode::InvalidParams, "tangent_count must be >= 2");
  const std::size_t rows = d.dims.rows, cols = d.dims.cols, n = rows + cols;

  // Primal: min 1'z  s.t.  (a/w^2) W_c + H_r >= 2a/w,  z >= 0.
  // Solved through its dual  max beta'u  s.t.  M'u <= 1, u >= 0, whose slack
  // basis is feasible; the primal point is read off the dual's shadow prices.
  struct Row {
    std::size_t col, row;
    double slope, rhs;
  };
  std::vector<Row> cons;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double a = d.at(r, c);
      if (a <= 0.0) continue;
      for (double w : tangent_points(a, tangent_count)) cons.push_back({c, r, a / (w * w), 2.0 * a / w});
    }

  AreaSolution s;
  s.col_widths.assign(cols, 0.0);
  s.row_heights.assign(rows, 0.0);
  if (cons.empty()) return s;

  const std::size_t m = cons.size();
  std::vector<double> a_t(n * m, 0.0), ones(n, 1.0), beta(m);
  for (std::size_t k = 0; k < m; ++k) {
    a_t[cons[k].col * m + k] = cons[k].slope;
    a_t[(cols + cons[k].row) * m + k] = 1.0;
    beta[k] = cons[k].rhs;
  }
  const LpResult lp = maximize_lp(a_t, ones, beta);
  if (lp.status != LpStatus::Optimal) throw Error(ErrorCode::SolverFailure, "area LP did not reach optimality");
  for (std::size_t c = 0; c < cols; ++c) s.col_widths[c] = lp.duals[c];
  for (std::size_t r = 0; r < rows; ++r) s.row_heights[r] = lp.duals[cols + r];
  s.area = bounding_area(s.col_widths, s.row_heights);
  return s;
}

namespace detail {

// Gaussian elimination with partial pivoting; a is n x n row-major.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
    if (a[piv * n + k] == 0.0) return false;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k * n + j] * b[j];
    b[k] = s / a[k * n + k];
  }
  return true;
}

inline double log_sum_exp(std::span<const double> v, std::vector<double>* softmax = nullptr) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  if (softmax) {
    softmax->resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) (*softmax)[i] = std::exp(v[i] - mx) / s;
  }
  return mx + std::log(s);
}

// Given widths, shrink every used row to its tightest height, then every used
// column to its tightest width. Never increases the bounding area.
inline void tighten(const CellDemand& d, std::vector<double>& w, std::vector<double>& h) {
  for (std::size_t r = 0; r < d.dims.rows; ++r) {
    double best = 0.0;
    for (std::size_t c = 0; c < d.dims.cols; ++c)
      if (d.at(r, c) > 0.0) best = std::max(best, d.at(r, c) / w[c]);
    h[r] = best;
  }
  for (std::size_t c = 0; c < d.dims.cols; ++c) {
    double best = 0.0;
    for (std::size_t r = 0; r < d.dims.rows; ++r)
      if (d.at(r, c) > 0.0) best = std::max(best, d.at(r, c) / h[r]);
    w[c] = best;
  }
}

// Log-barrier Newton on the convex log-space problem. w/h must be strictly
// feasible on entry; they are overwritten with the barrier solution.
inline bool barrier_solve(const CellDemand& d, std::vector<double>& w, std::vector<double>& h, double tol,
                          std::size_t max_newton, std::size_t& newton_steps) {
  std::vector<std::size_t> act_cols, act_rows;
  std::vector<std::size_t> col_ord(d.dims.cols, 0), row_ord(d.dims.rows, 0);
  for (std::size_t c = 0; c < d.dims.cols; ++c)
    if (w[c] > 0.0) {
      col_ord[c] = act_cols.size();
      act_cols.push_back(c);
    }
  for (std::size_t r = 0; r < d.dims.rows; ++r)
    if (h[r] > 0.0) {
      row_ord[r] = act_rows.size();
      act_rows.push_back(r);
    }
  const std::size_t p = act_cols.size(), q = act_rows.size();
  if (p == 0 || q == 0) return true;

  struct Con {
    std::size_t xi, yi;
    double log_a;
  };
  std::vector<Con> cons;
  for (std::size_t r = 0; r < d.dims.rows; ++r)
    for (std::size_t c = 0; c < d.dims.cols; ++c)
      if (d.at(r, c) > 0.0) cons.push_back({col_ord[c], row_ord[r], std::log(d.at(r, c))});
  const double m = static_cast<double>(cons.size());

  // z = [x_0 .. x_{p-1}, y_0 .. y_{q-1}]; x_0 is pinned (the objective and the
  // constraints are invariant under x + s, y - s).
  std::vector<double> z(p + q);
  for (std::size_t i = 0; i < p; ++i) z[i] = std::log(w[act_cols[i]]);
  for (std::size_t j = 0; j < q; ++j) z[p + j] = std::log(h[act_rows[j]]);
  const std::size_t nfree = p - 1 + q;

  auto slack = [&](const std::vector<double>& v, const Con& k) { return v[k.xi] + v[p + k.yi] - k.log_a; };
  auto phi = [&](const std::vector<double>& v, double t) {
    double s = t * (log_sum_exp(std::span(v).subspan(0, p)) + log_sum_exp(std::span(v).subspan(p, q)));
    for (const auto& k : cons) {
      const double g = slack(v, k);
      if (g <= 0.0) return std::numeric_limits<double>::infinity();
      s -= std::log(g);
    }
    return s;
  };
  // free index of a full index, or npos for the pinned x_0
  auto fidx = [&](std::size_t full) { return full == 0 ? nfree : full - 1; };

  bool converged = false;
  std::vector<double> px, py, grad(nfree), hess(nfree * nfree), dz(p + q, 0.0), trial(p + q);
  if (nfree == 0) return true;
  for (double t = 1.0; newton_steps < max_newton; t *= 10.0) {
    for (std::size_t stage_steps = 0; newton_steps < max_newton && stage_steps < 100; ++newton_steps, ++stage_steps) {
      log_sum_exp(std::span(z).subspan(0, p), &px);
      log_sum_exp(std::span(z).subspan(p, q), &py);
      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(hess.begin(), hess.end(), 0.0);
      auto add_g = [&](std::size_t full, double v) {
        if (std::size_t f = fidx(full); f < nfree) grad[f] += v;
      };
      auto add_h = [&](std::size_t fa, std::size_t fb, double v) {
        const std::size_t a = fidx(fa), b = fidx(fb);
        if (a < nfree && b < nfree) hess[a * nfree + b] += v;
      };
      for (std::size_t i = 0; i < p; ++i) {
        add_g(i, t * px[i]);
        for (std::size_t k = 0; k < p; ++k) add_h(i, k, t * ((i == k ? px[i] : 0.0) - px[i] * px[k]));
      }
      for (std::size_t j = 0; j < q; ++j) {
        add_g(p + j, t * py[j]);
        for (std::size_t k = 0; k < q; ++k) add_h(p + j, p + k, t * ((j == k ? py[j] : 0.0) - py[j] * py[k]));
      }
      for (const auto& k : cons) {
        const double g = slack(z, k);
        const std::size_t a = k.xi, b = p + k.yi;
        add_g(a, -1.0 / g);
        add_g(b, -1.0 / g);
        const double g2 = 1.0 / (g * g);
        add_h(a, a, g2);
        add_h(b, b, g2);
        add_h(a, b, g2);
        add_h(b, a, g2);
      }
      std::vector<double> step(grad.size());
      for (std::size_t i = 0; i < nfree; ++i) step[i] = -grad[i];
      std::vector<double> hcopy = hess;
      if (!solve_dense(hcopy, step, nfree)) return false;
      double decrement = 0.0;
      for (std::size_t i = 0; i < nfree; ++i) decrement -= grad[i] * step[i];
      if (decrement / 2.0 <= 1e-10) break;

      std::fill(dz.begin(), dz.end(), 0.0);
      for (std::size_t full = 1; full < p + q; ++full) dz[full] = step[fidx(full)];
      double s = 1.0;
      for (const auto& k : cons) {
        const double dg = dz[k.xi] + dz[p + k.yi];
        if (dg < 0.0) s = std::min(s, 0.99 * slack(z, k) / -dg);
      }
      const double f0 = phi(z, t);
      bool moved = false;
      for (int tries = 0; tries < 60; ++tries, s *= 0.5) {
        for (std::size_t i = 0; i < z.size(); ++i) trial[i] = z[i] + s * dz[i];
        const double f1 = phi(trial, t);
        if (f1 < f0 && f1 <= f0 - 0.01 * s * decrement) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      z = trial;
    }
    if (m / t < tol) {
      converged = true;
      break;
    }
  }

  for (std::size_t i = 0; i < p; ++i) w[act_cols[i]] = std::exp(z[i]);
  for (std::size_t j = 0; j < q; ++j) h[act_rows[j]] = std::exp(z[p + j]);
  return converged;
}

}  // namespace detail

// Global optimum of the bounding area, starting from (init_widths,
// init_heights) which need not be feasible. The result is feasible to
// floating-point accuracy and is scaled so the bounding box is square (the
// area is invariant under W*s, H/s). `converged` is false when the Newton
// iteration budget ran out; the best iterate is still returned.
inline AreaSolution min_area_exact(const CellDemand& d, std::span<const double> init_widths,
                                   std::span<const double> init_heights, double tol = 1e-9,
                                   std::size_t max_iters = 1000) {
  validate(d);
  if (init_widths.size() != d.dims.cols || init_heights.size() != d.dims.rows)
    throw Error(ErrorCode::InvalidParams, "initial widths/heights do not match grid");

  AreaSolution start;
  start.col_widths.assign(init_widths.begin(), init_widths.end());
  start.row_heights.assign(init_heights.begin(), init_heights.end());
  for (double& v : start.col_widths) v = std::max(v, 0.0);
  for (double& v : start.row_heights) v = std::max(v, 0.0);
  AreaSolution best = repair_feasibility(d, std::move(start));
  if (best.area <= 0.0) return best;

  // Block coordinate descent: cheap, monotone, usually lands close.
  std::vector<double> w = best.col_widths, h = best.row_heights;
  double prev = best.area;
  std::size_t passes = 0;
  for (; passes < max_iters; ++passes) {
    detail::tighten(d, w, h);
    const double a = bounding_area(w, h);
    const bool done = prev - a <= tol * prev;
    prev = a;
    if (done) break;
  }
  if (prev < best.area) {
    best.col_widths = w;
    best.row_heights = h;
    best.area = prev;
  }

  // Interior start for the barrier.
  std::vector<double> bw = best.col_widths, bh = best.row_heights;
  for (double& v : bw) v *= 1.01;
  std::size_t newton = 0;
  const bool ok = detail::barrier_solve(d, bw, bh, tol, max_iters, newton);
  detail::tighten(d, bw, bh);
  detail::tighten(d, bw, bh);
  const double barrier_area = bounding_area(bw, bh);
  if (barrier_area < best.area) {
    best.col_widths = bw;
    best.row_heights = bh;
    best.area = barrier_area;
  }
  best.converged = ok;
  best.iterations = passes + newton;

  double sw = 0.0, sh = 0.0;
  for (double v : best.col_widths) sw += v;
  for (double v : best.row_heights) sh += v;
  if (sw > 0.0 && sh > 0.0) {
    const double k = std::sqrt(sh / sw);
    for (double& v : best.col_widths) v *= k;
    for (double& v : best.row_heights) v /= k;
  }
  best.area = bounding_area(best.col_widths, best.row_heights);
  return best;
}

// LP relaxation followed by exact refinement; the kernel every step uses to
// size a layer.
inline AreaSolution solve_area(const CellDemand& d, std::size_t tangent_count = 8) {
  const AreaSolution lp = min_area_lp(d, tangent_count);
  return min_area_exact(d, lp.col_widths, lp.row_heights);
}

}  // namespace noc3d
