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


// Step 3: number of TSV arrays per boundary. For a candidate count i the
// arrays are dropped uniformly at random onto router sites of the upper layer,
// every component with traffic across the boundary attaches to its nearest
// array, and
//
//   C3(i) = w_area * i * K + w_util * E[ sum_j b_j d_j ]
//
// is estimated over `samples` trials. The count is the argmin over i.

#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/model.hpp"
#include "noc3d/rng.hpp"

namespace noc3d {

// Bandwidth a component sends or receives across boundary b (between layers
// b and b + 1), at its planar position.
struct CrossTerminal {
  std::size_t component = 0;
  Point position;
  double bandwidth = 0.0;
};

inline bool crosses(std::size_t boundary, std::size_t layer_a, std::size_t layer_b) {
  const std::size_t lo = std::min(layer_a, layer_b), hi = std::max(layer_a, layer_b);
  return lo <= boundary && hi > boundary;
}

inline std::vector<CrossTerminal> cross_terminals(const Problem& p, std::span<const LayerFloorplan> fps,
                                                  std::size_t boundary) {
  const auto where = locate_components(p.component_count(), fps);
  std::vector<double> bw(p.component_count(), 0.0);
  for (const auto& f : p.flows())
    if (crosses(boundary, where[f.src].layer, where[f.dst].layer)) {
      bw[f.src] += f.bandwidth;
      bw[f.dst] += f.bandwidth;
    }
  std::vector<CrossTerminal> out;
  for (std::size_t c = 0; c < bw.size(); ++c)
    if (bw[c] > 0.0) out.push_back({c, fps[where[c].layer].center(where[c].cell), bw[c]});
  return out;
}

struct TsvEstimate {
  std::size_t count = 0;
  std::vector<double> bandwidth;  // b_j, mean over trials of the j-th busiest array
  std::vector<double> distance;   // d_j, bandwidth-weighted mean distance, likewise
  double expected_bd = 0.0;       // E[sum_j b_j d_j]
  double c3 = 0.0;
};

inline std::uint64_t tsv_trial_seed(std::uint64_t seed, std::size_t boundary, std::size_t count) {
  return derive_seed(derive_seed(seed, 3, boundary), count);
}

// Expected per-array load and distance for `count` arrays over `sites`.
inline TsvEstimate estimate_arrays(std::span<const CrossTerminal> terminals, std::span<const Point> sites,
                                   std::size_t count, std::size_t samples, std::uint64_t seed, double koz_area,
                                   const ObjectiveWeights& w) {
  if (count == 0 || samples == 0) throw Error(ErrorCode::InvalidParams, "array count and samples must be >= 1");
  if (count > sites.size())
    throw Error(ErrorCode::TooManyArrays, std::to_string(count) + " arrays but only " + std::to_string(sites.size()) +
                                              " sites");
  TsvEstimate est;
  est.count = count;
  est.bandwidth.assign(count, 0.0);
  est.distance.assign(count, 0.0);
  Rng rng(seed);
  std::vector<std::size_t> pool(sites.size());
  std::vector<double> b(count), bd(count);
  std::vector<std::size_t> order(count);
  for (std::size_t trial = 0; trial < samples; ++trial) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t k = 0; k < count; ++k) std::swap(pool[k], pool[k + uniform_index(rng, pool.size() - k)]);
    std::fill(b.begin(), b.end(), 0.0);
    std::fill(bd.begin(), bd.end(), 0.0);
    for (const auto& t : terminals) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < count; ++j) {
        const double d = manhattan(t.position, sites[pool[j]]);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      b[best] += t.bandwidth;
      bd[best] += t.bandwidth * best_d;
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return b[x] > b[y]; });
    for (std::size_t j = 0; j < count; ++j) {
      est.bandwidth[j] += b[order[j]];
      est.distance[j] += b[order[j]] > 0.0 ? bd[order[j]] / b[order[j]] : 0.0;
      est.expected_bd += bd[order[j]];
    }
  }
  const double n = static_cast<double>(samples);
  for (double& v : est.bandwidth) v /= n;
  for (double& v : est.distance) v /= n;
  est.expected_bd /= n;
  est.c3 = w.area * static_cast<double>(count) * koz_area + w.util * est.expected_bd;
  return est;
}

struct TsvPlan {
  std::size_t boundary = 0;
  std::size_t count = 0;
  double c3 = 0.0;
  std::vector<TsvEstimate> curve;  // one entry per evaluated i
};

struct TsvParams {
  std::size_t samples = 64;
  std::size_t max_count = 0;  // 0: min(routers below, routers above)
  std::uint64_t seed = 1;
};

// Upper-layer router sites of a boundary.
inline std::vector<Point> array_sites(std::span<const LayerFloorplan> fps, std::size_t boundary) {
  std::vector<Point> out;
  const auto& up = fps[boundary + 1];
  for (std::size_t c : up.occupied_cells()) out.push_back(up.center(c));
  return out;
}

inline TsvPlan choose_count(const Problem& p, std::span<const LayerFloorplan> fps, std::size_t boundary,
                            const ObjectiveWeights& w, const TsvParams& params) {
  TsvPlan plan;
  plan.boundary = boundary;
  const auto terminals = cross_terminals(p, fps, boundary);
  if (terminals.empty()) {
    TsvEstimate zero;
    plan.curve.push_back(zero);
    return plan;
  }
  const auto sites = array_sites(fps, boundary);
  std::size_t max_i = std::min(fps[boundary].occupied_cells().size(), sites.size());
  if (params.max_count > 0) max_i = std::min(max_i, params.max_count);
  if (max_i == 0)
    throw Error(ErrorCode::NoCandidates, "boundary " + std::to_string(boundary) + " carries traffic but has no routers");
  for (std::size_t i = 1; i <= max_i; ++i) {
    plan.curve.push_back(estimate_arrays(terminals, sites, i, params.samples,
                                         tsv_trial_seed(params.seed, boundary, i), p.tech().koz_area, w));
    if (i == 1 || plan.curve.back().c3 < plan.c3) {
      plan.c3 = plan.curve.back().c3;
      plan.count = i;
    }
  }
  return plan;
}

}  // namespace noc3d
