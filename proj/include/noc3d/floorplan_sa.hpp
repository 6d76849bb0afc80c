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


// Step 2: per-layer mesh floorplanning by simulated annealing over cell
// assignments. Step 5: legalization once 3D routers and KOZs are known.

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <span>
#include <vector>

#include "noc3d/anneal.hpp"
#include "noc3d/area_kernel.hpp"
#include "noc3d/model.hpp"
#include "noc3d/net_route.hpp"
#include "noc3d/objective.hpp"
#include "noc3d/rng.hpp"

namespace noc3d {

// Near-square grid: ceil(sqrt n) columns, as many rows as needed.
inline GridDims grid_dims_for(std::size_t n) {
  if (n == 0) return {0, 0};
  std::size_t cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  while (cols * cols < n) ++cols;
  while (cols > 1 && (cols - 1) * (cols - 1) >= n) --cols;
  return {(n + cols - 1) / cols, cols};
}

// Occupied cells form one 4-connected region (so every intralayer pair has a
// mesh path).
inline bool occupied_connected(GridDims dims, std::span<const std::optional<std::size_t>> cell_of) {
  std::vector<std::size_t> stack;
  std::vector<bool> seen(cell_of.size(), false);
  std::size_t total = 0;
  for (std::size_t i = 0; i < cell_of.size(); ++i)
    if (cell_of[i]) {
      ++total;
      if (stack.empty()) {
        stack.push_back(i);
        seen[i] = true;
      }
    }
  std::size_t reached = 0;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    ++reached;
    const std::size_t r = u / dims.cols, c = u % dims.cols;
    auto visit = [&](std::size_t v) {
      if (cell_of[v] && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    };
    if (c > 0) visit(u - 1);
    if (c + 1 < dims.cols) visit(u + 1);
    if (r > 0) visit(u - dims.cols);
    if (r + 1 < dims.rows) visit(u + dims.cols);
  }
  return reached == total;
}

struct FloorplanParams {
  SaParams sa;
  std::size_t neighbor_tries = 64;  // resamples to find a connected swap
};

namespace detail {

// Intralayer flows as (cell, cell, bandwidth) for a given placement.
struct LayerTraffic {
  std::vector<std::size_t> src, dst;  // component indices
  std::vector<double> bandwidth;
};

inline LayerTraffic intralayer_traffic(const Problem& p, const LayerAssignment& a, std::size_t layer) {
  LayerTraffic t;
  for (const auto& f : p.flows())
    if (a.layer_of[f.src] == layer && a.layer_of[f.dst] == layer) {
      t.src.push_back(f.src);
      t.dst.push_back(f.dst);
      t.bandwidth.push_back(f.bandwidth);
    }
  return t;
}

}  // namespace detail

// C2 of a placement: w_area * area + w_peak * peak + w_util * util, with the
// area from the feasibility-repaired LP and traffic routed XY.
inline double step2_cost(const Problem& p, LayerFloorplan& scratch, const detail::LayerTraffic& traffic,
                         const ObjectiveWeights& w) {
  const CellDemand d = layer_demand(p, scratch);
  const AreaSolution s = repair_feasibility(d, min_area_lp(d));
  scratch.col_widths = s.col_widths;
  scratch.row_heights = s.row_heights;
  double cost = w.area * s.area;
  if (!traffic.bandwidth.empty() && (w.peak > 0.0 || w.util > 0.0)) {
    std::vector<std::size_t> cell_of_comp(p.component_count(), 0);
    for (std::size_t i = 0; i < scratch.cell_of.size(); ++i)
      if (scratch.cell_of[i]) cell_of_comp[*scratch.cell_of[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < traffic.src.size(); ++k)
      pairs.emplace_back(cell_of_comp[traffic.src[k]], cell_of_comp[traffic.dst[k]]);
    const XyEval xy = route_xy(scratch, pairs, traffic.bandwidth, p.tech().link_capacity);
    cost += w.peak * xy.peak_penalty + w.util * xy.bw_times_distance;
  }
  return cost;
}

struct LayerFloorplanResult {
  LayerFloorplan floorplan;
  double best_cost = 0.0;
  std::vector<double> cost_trace;
};

// One layer. `dims` defaults to grid_dims_for(|members|).
inline LayerFloorplanResult floorplan_layer(const Problem& p, const LayerAssignment& a, std::size_t layer,
                                            const ObjectiveWeights& w, const FloorplanParams& params,
                                            std::optional<GridDims> dims = std::nullopt) {
  const std::vector<std::size_t> members = a.members(layer);
  const GridDims g = dims.value_or(grid_dims_for(members.size()));
  if (members.size() > g.cells())
    throw Error(ErrorCode::InvalidParams, "layer " + std::to_string(layer) + ": " + std::to_string(members.size()) +
                                              " components do not fit a " + std::to_string(g.rows) + "x" +
                                              std::to_string(g.cols) + " mesh");
  LayerFloorplan fp = empty_floorplan(layer, g);
  for (std::size_t i = 0; i < members.size(); ++i) fp.cell_of[i] = members[i];
  LayerFloorplanResult out;
  if (members.empty()) {
    out.floorplan = fp;
    return out;
  }
  if (!occupied_connected(g, fp.cell_of))
    throw Error(ErrorCode::InvalidParams, "row-major start is not connected");

  using State = std::vector<std::optional<std::size_t>>;
  const detail::LayerTraffic traffic = detail::intralayer_traffic(p, a, layer);
  LayerFloorplan scratch = fp;
  auto cost = [&](const State& s) {
    scratch.cell_of = s;
    return step2_cost(p, scratch, traffic, w);
  };
  const std::size_t n = g.cells();
  auto neighbor = [&](const State& s, Rng& rng) {
    if (n < 2) return s;
    for (std::size_t t = 0; t < params.neighbor_tries; ++t) {
      const std::size_t i = uniform_index(rng, n);
      std::size_t j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      if (!s[i] && !s[j]) continue;
      State next = s;
      std::swap(next[i], next[j]);
      if (occupied_connected(g, next)) return next;
    }
    return s;
  };
  const auto res = anneal(fp.cell_of, neighbor, cost, params.sa);
  fp.cell_of = res.best_state;
  const AreaSolution exact = solve_area(layer_demand(p, fp));
  fp.col_widths = exact.col_widths;
  fp.row_heights = exact.row_heights;
  out.floorplan = std::move(fp);
  out.best_cost = res.best_cost;
  out.cost_trace = res.cost_trace;
  return out;
}

// Every layer, each with its own derived seed; layers run concurrently.
inline std::vector<LayerFloorplanResult> floorplan_all(const Problem& p, const LayerAssignment& a,
                                                       const ObjectiveWeights& w, const FloorplanParams& params,
                                                       const std::vector<std::optional<GridDims>>& dims = {},
                                                       bool parallel = true) {
  const std::size_t L = p.layer_count();
  auto run = [&](std::size_t l) {
    FloorplanParams lp = params;
    lp.sa.seed = derive_seed(params.sa.seed, 2, l);
    return floorplan_layer(p, a, l, w, lp, l < dims.size() ? dims[l] : std::nullopt);
  };
  std::vector<LayerFloorplanResult> out;
  if (!parallel || L < 2) {
    for (std::size_t l = 0; l < L; ++l) out.push_back(run(l));
    return out;
  }
  std::vector<std::future<LayerFloorplanResult>> jobs;
  for (std::size_t l = 0; l < L; ++l) jobs.push_back(std::async(std::launch::async, run, l));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// ---------------------------------------------------------------------------
// Layer alignment (no redistribution): cells with equal (row, col) share one
// centre on every layer. Column i gets the widest width any layer gives it.

inline void align_layers(std::vector<LayerFloorplan>& fps) {
  std::size_t rows = 0, cols = 0;
  for (const auto& fp : fps) {
    rows = std::max(rows, fp.dims.rows);
    cols = std::max(cols, fp.dims.cols);
  }
  std::vector<double> w(cols, 0.0), h(rows, 0.0);
  for (const auto& fp : fps) {
    for (std::size_t c = 0; c < fp.dims.cols; ++c) w[c] = std::max(w[c], fp.col_widths[c]);
    for (std::size_t r = 0; r < fp.dims.rows; ++r) h[r] = std::max(h[r], fp.row_heights[r]);
  }
  double total_w = 0.0, total_h = 0.0;
  for (double v : w) total_w += v;
  for (double v : h) total_h += v;
  for (auto& fp : fps) {
    for (std::size_t c = 0; c < fp.dims.cols; ++c) fp.col_widths[c] = w[c];
    for (std::size_t r = 0; r < fp.dims.rows; ++r) fp.row_heights[r] = h[r];
    fp.origin = Point{-total_w / 2.0, -total_h / 2.0};
  }
}

// Router centre distance between the two ends of a vertical link.
inline double rd_distance(std::span<const LayerFloorplan> fps, const VerticalLink& v) {
  return manhattan(fps[v.boundary].center(v.lower_cell), fps[v.boundary + 1].center(v.upper_cell));
}

inline void refresh_rd_lengths(std::span<const LayerFloorplan> fps, std::vector<VerticalLink>& vlinks) {
  for (auto& v : vlinks) v.rd_length = rd_distance(fps, v);
}

// ---------------------------------------------------------------------------
// Legalization

struct LegalizeOptions {
  // Redistribution: a KOZ may sit in any cell whose centre is within R of
  // the downward router. Off means every KOZ stays under its router.
  bool redistribute = true;
  bool align = false;
};

// Re-sizes every layer for 3D routers and KOZs. Vertical link RD lengths
// are refreshed on the new geometry.
inline std::vector<LayerFloorplan> legalize(const Problem& p, std::vector<LayerFloorplan> fps,
                                            std::vector<VerticalLink>& vlinks, const LegalizeOptions& opt = {}) {
  apply_router_kinds(fps, vlinks);
  for (auto& fp : fps) std::fill(fp.koz_charge.begin(), fp.koz_charge.end(), 0.0);
  const double K = p.tech().koz_area;
  const double R = p.tech().rd_max_length;
  const std::vector<LayerFloorplan> before = fps;  // geometry used for RD reach

  for (const auto& v : vlinks) {
    auto& up = fps[v.boundary + 1];
    const std::size_t home = v.upper_cell;
    if (!opt.redistribute || R <= 0.0 || K <= 0.0) {
      up.koz_charge[home] += K;
      continue;
    }
    const auto& geo = before[v.boundary + 1];
    const Point origin = geo.center(home);
    std::size_t best_cell = home;
    double best_area = std::numeric_limits<double>::infinity(), best_dist = 0.0;
    for (std::size_t c = 0; c < up.dims.cells(); ++c) {
      const double dist = manhattan(origin, geo.center(c));
      if (dist > R + 1e-9) continue;
      up.koz_charge[c] += K;
      const double area = solve_area(layer_demand(p, up)).area;
      up.koz_charge[c] -= K;
      const bool better = !std::isfinite(best_area) || area < best_area - 1e-9 * best_area ||
                          (area <= best_area + 1e-9 * best_area && dist < best_dist - 1e-12);
      if (better) {
        best_area = area;
        best_cell = c;
        best_dist = dist;
      }
    }
    up.koz_charge[best_cell] += K;
  }
  for (auto& fp : fps) {
    fp.origin.reset();
    if (fp.dims.cells() == 0) continue;
    const AreaSolution s = solve_area(layer_demand(p, fp));
    fp.col_widths = s.col_widths;
    fp.row_heights = s.row_heights;
  }
  if (opt.align) align_layers(fps);
  refresh_rd_lengths(fps, vlinks);
  return fps;
}

}  // namespace noc3d
