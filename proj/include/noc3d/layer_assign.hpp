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


// Step 1: component-to-layer assignment minimizing
//
//   C1 = w_area * max_l sum_{c in C(l)} area(c,l) + w_power * sum power(c,l(c))
//        [+ w_perf * sum perf(c,l(c))]
//
// by branch and bound. The perf term is off unless requested.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/model.hpp"

namespace noc3d {

struct AssignOptions {
  bool include_perf = false;
  std::size_t max_components = 30;
};

namespace detail {

struct Step1Table {
  std::size_t n = 0, layers = 0;
  std::vector<double> area;     // [c * layers + l], +inf when infeasible
  std::vector<double> linear;   // w_power * power (+ w_perf * perf)
  double w_area = 0.0;

  Step1Table(const Problem& p, const ObjectiveWeights& w, const AssignOptions& o)
      : n(p.component_count()), layers(p.layer_count()), w_area(w.area) {
    const double inf = std::numeric_limits<double>::infinity();
    area.assign(n * layers, inf);
    linear.assign(n * layers, inf);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t l = 0; l < layers; ++l)
        if (const auto& e = p.ppa(c, l)) {
          area[c * layers + l] = e->area;
          linear[c * layers + l] = w.power * e->power + (o.include_perf ? w.perf * e->perf : 0.0);
        }
  }
  bool feasible(std::size_t c, std::size_t l) const { return std::isfinite(area[c * layers + l]); }
};

inline bool cost_less(double a, double b) {
  if (!std::isfinite(b)) return a < b;
  return a < b - 1e-9 * std::max(1.0, std::abs(b));
}

}  // namespace detail

inline double step1_cost(const Problem& p, const LayerAssignment& a, const ObjectiveWeights& w,
                         const AssignOptions& o = {}) {
  std::vector<double> layer_area(p.layer_count(), 0.0);
  double linear = 0.0;
  for (std::size_t c = 0; c < a.layer_of.size(); ++c) {
    const auto& e = p.ppa(c, a.layer_of[c]);
    if (!e) throw Error(ErrorCode::NoFeasibleLayer, "'" + p.component(c).id + "' on an infeasible layer");
    layer_area[a.layer_of[c]] += e->area;
    linear += w.power * e->power + (o.include_perf ? w.perf * e->perf : 0.0);
  }
  const double mx = layer_area.empty() ? 0.0 : *std::max_element(layer_area.begin(), layer_area.end());
  return w.area * mx + linear;
}

// Largest feasible area first; each component goes to the layer with the
// smallest resulting C1 (lowest index on ties).
inline LayerAssignment assign_layers_greedy(const Problem& p, const ObjectiveWeights& w, const AssignOptions& o = {}) {
  const detail::Step1Table t(p, w, o);
  std::vector<std::size_t> order(t.n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> max_area(t.n, 0.0);
  for (std::size_t c = 0; c < t.n; ++c) {
    bool any = false;
    for (std::size_t l = 0; l < t.layers; ++l)
      if (t.feasible(c, l)) {
        max_area[c] = std::max(max_area[c], t.area[c * t.layers + l]);
        any = true;
      }
    if (!any) throw Error(ErrorCode::NoFeasibleLayer, "component '" + p.component(c).id + "' has no feasible layer");
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return max_area[a] > max_area[b]; });

  LayerAssignment out;
  out.layer_of.assign(t.n, 0);
  std::vector<double> load(t.layers, 0.0);
  double mx = 0.0;
  for (std::size_t c : order) {
    std::size_t best_l = t.layers;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < t.layers; ++l) {
      if (!t.feasible(c, l)) continue;
      const double v = t.w_area * std::max(mx, load[l] + t.area[c * t.layers + l]) + t.linear[c * t.layers + l];
      if (detail::cost_less(v, best)) {
        best = v;
        best_l = l;
      }
    }
    out.layer_of[c] = best_l;
    load[best_l] += t.area[c * t.layers + best_l];
    mx = std::max(mx, load[best_l]);
  }
  return out;
}

// Exact minimum of C1. Among optimal assignments returns the one that is
// lexicographically smallest in (layer of component 0, layer of component 1, ...).
inline LayerAssignment assign_layers(const Problem& p, const ObjectiveWeights& w, const AssignOptions& o = {}) {
  const detail::Step1Table t(p, w, o);
  if (t.n > o.max_components)
    throw Error(ErrorCode::InstanceTooLarge, std::to_string(t.n) + " components exceed the exact assignment cap of " +
                                                 std::to_string(o.max_components));
  LayerAssignment greedy = assign_layers_greedy(p, w, o);
  if (t.n == 0) return greedy;
  const std::size_t L = t.layers;

  std::vector<double> min_area(t.n), min_linear(t.n);
  for (std::size_t c = 0; c < t.n; ++c) {
    min_area[c] = min_linear[c] = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l) {
      min_area[c] = std::min(min_area[c], t.area[c * L + l]);
      min_linear[c] = std::min(min_linear[c], t.linear[c * L + l]);
    }
  }

  struct Search {
    const detail::Step1Table& t;
    std::vector<std::size_t> order;
    std::vector<double> rest_area, rest_linear;  // suffix sums over `order`
    std::vector<double> load;
    std::vector<std::size_t> layer_of;
    double placed_area = 0.0;

    void prepare(const std::vector<double>& min_area, const std::vector<double>& min_linear) {
      rest_area.assign(order.size() + 1, 0.0);
      rest_linear.assign(order.size() + 1, 0.0);
      for (std::size_t k = order.size(); k-- > 0;) {
        rest_area[k] = rest_area[k + 1] + min_area[order[k]];
        rest_linear[k] = rest_linear[k + 1] + min_linear[order[k]];
      }
      load.assign(t.layers, 0.0);
      layer_of.assign(t.n, 0);
    }
    double bound(std::size_t depth, double mx, double linear) const {
      const double avg = (placed_area + rest_area[depth]) / static_cast<double>(t.layers);
      return t.w_area * std::max(mx, avg) + linear + rest_linear[depth];
    }
  };

  // Phase 1: optimal value. Most constrained and largest components first.
  Search s1{t, {}, {}, {}, {}, {}, 0.0};
  s1.order.resize(t.n);
  std::iota(s1.order.begin(), s1.order.end(), 0);
  std::vector<std::size_t> nfeas(t.n, 0);
  for (std::size_t c = 0; c < t.n; ++c)
    for (std::size_t l = 0; l < L; ++l) nfeas[c] += t.feasible(c, l);
  std::stable_sort(s1.order.begin(), s1.order.end(), [&](std::size_t a, std::size_t b) {
    if (nfeas[a] != nfeas[b]) return nfeas[a] < nfeas[b];
    return min_area[a] > min_area[b];
  });
  s1.prepare(min_area, min_linear);
  double best = step1_cost(p, greedy, w, o);
  std::function<void(std::size_t, double, double)> dfs1 = [&](std::size_t depth, double mx, double linear) {
    if (depth == t.n) {
      best = std::min(best, t.w_area * mx + linear);
      return;
    }
    if (!detail::cost_less(s1.bound(depth, mx, linear), best)) return;
    const std::size_t c = s1.order[depth];
    for (std::size_t l = 0; l < L; ++l) {
      if (!t.feasible(c, l)) continue;
      const double a = t.area[c * L + l];
      s1.load[l] += a;
      s1.placed_area += a;
      dfs1(depth + 1, std::max(mx, s1.load[l]), linear + t.linear[c * L + l]);
      s1.load[l] -= a;
      s1.placed_area -= a;
    }
  };
  dfs1(0, 0.0, 0.0);

  // Phase 2: first assignment in lexicographic order that attains `best`.
  Search s2{t, {}, {}, {}, {}, {}, 0.0};
  s2.order.resize(t.n);
  std::iota(s2.order.begin(), s2.order.end(), 0);
  s2.prepare(min_area, min_linear);
  bool found = false;
  std::function<void(std::size_t, double, double)> dfs2 = [&](std::size_t depth, double mx, double linear) {
    if (found) return;
    if (depth == t.n) {
      found = !detail::cost_less(best, t.w_area * mx + linear);
      return;
    }
    if (detail::cost_less(best, s2.bound(depth, mx, linear))) return;
    const std::size_t c = s2.order[depth];
    for (std::size_t l = 0; l < L && !found; ++l) {
      if (!t.feasible(c, l)) continue;
      const double a = t.area[c * L + l];
      s2.load[l] += a;
      s2.placed_area += a;
      s2.layer_of[c] = l;
      dfs2(depth + 1, std::max(mx, s2.load[l]), linear + t.linear[c * L + l]);
      s2.load[l] -= a;
      s2.placed_area -= a;
    }
  };
  dfs2(0, 0.0, 0.0);
  if (!found) throw Error(ErrorCode::SolverFailure, "assignment search lost its incumbent");
  return LayerAssignment{s2.layer_of};
}

}  // namespace noc3d
