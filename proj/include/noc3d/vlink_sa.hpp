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


// Step 4: which router pairs get the vertical links. Candidates are router
// pairs of adjacent layers within redistribution reach R; a router carries at
// most one link per direction, so a selection is a matching. Simulated
// annealing swaps one chosen candidate for an unchosen one and scores the
// full 3D network.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <vector>

#include "noc3d/anneal.hpp"
#include "noc3d/error.hpp"
#include "noc3d/model.hpp"
#include "noc3d/net_route.hpp"
#include "noc3d/tsv_count.hpp"

namespace noc3d {

inline constexpr double kReachSlack = 1e-9;

// Every router pair on `boundary` within Manhattan distance R, sorted by
// (distance, lower cell, upper cell).
inline std::vector<VerticalLink> candidate_links(std::span<const LayerFloorplan> fps, std::size_t boundary, double R) {
  std::vector<VerticalLink> out;
  const auto& lo = fps[boundary];
  const auto& up = fps[boundary + 1];
  for (std::size_t a : lo.occupied_cells())
    for (std::size_t b : up.occupied_cells()) {
      const double d = manhattan(lo.center(a), up.center(b));
      if (d <= R + kReachSlack) out.push_back({boundary, a, b, d});
    }
  std::stable_sort(out.begin(), out.end(), [](const VerticalLink& x, const VerticalLink& y) {
    return std::tie(x.rd_length, x.lower_cell, x.upper_cell) < std::tie(y.rd_length, y.lower_cell, y.upper_cell);
  });
  return out;
}

// Kuhn's augmenting paths on the candidate graph. `match` holds chosen
// candidate indices; it is extended in place up to `target` edges. Returns
// the resulting size.
inline std::size_t extend_matching(std::span<const VerticalLink> cands, std::vector<std::size_t>& match,
                                   std::size_t target = std::numeric_limits<std::size_t>::max()) {
  std::map<std::size_t, std::vector<std::size_t>> adj;  // lower cell -> candidate ids
  for (std::size_t k = 0; k < cands.size(); ++k) adj[cands[k].lower_cell].push_back(k);
  std::map<std::size_t, std::size_t> lower_edge, upper_edge;  // cell -> candidate
  for (std::size_t k : match) {
    lower_edge[cands[k].lower_cell] = k;
    upper_edge[cands[k].upper_cell] = k;
  }
  std::map<std::size_t, bool> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t lower) {
    for (std::size_t k : adj[lower]) {
      const std::size_t u = cands[k].upper_cell;
      if (seen[u]) continue;
      seen[u] = true;
      auto it = upper_edge.find(u);
      if (it == upper_edge.end() || augment(cands[it->second].lower_cell)) {
        upper_edge[u] = k;
        lower_edge[lower] = k;
        return true;
      }
    }
    return false;
  };
  std::size_t size = lower_edge.size();
  for (const auto& [lower, ks] : adj) {
    if (size >= target) break;
    if (lower_edge.count(lower)) continue;
    seen.clear();
    if (augment(lower)) ++size;
  }
  match.clear();
  for (const auto& [lower, k] : lower_edge) match.push_back(k);
  std::sort(match.begin(), match.end());
  return size;
}

inline std::size_t max_matching(std::span<const VerticalLink> cands) {
  std::vector<std::size_t> m;
  return extend_matching(cands, m);
}

inline bool is_matching(std::span<const VerticalLink> cands, std::span<const std::size_t> chosen) {
  std::vector<std::size_t> lo, up;
  for (std::size_t k : chosen) {
    lo.push_back(cands[k].lower_cell);
    up.push_back(cands[k].upper_cell);
  }
  std::sort(lo.begin(), lo.end());
  std::sort(up.begin(), up.end());
  return std::adjacent_find(lo.begin(), lo.end()) == lo.end() && std::adjacent_find(up.begin(), up.end()) == up.end();
}

// Smallest R that admits `count` disjoint links on the boundary.
inline double minimum_reach(std::span<const LayerFloorplan> fps, std::size_t boundary, std::size_t count) {
  auto all = candidate_links(fps, boundary, std::numeric_limits<double>::infinity());
  for (const auto& c : all) {
    auto within = candidate_links(fps, boundary, c.rd_length);
    if (max_matching(within) >= count) return c.rd_length;
  }
  return std::numeric_limits<double>::infinity();
}

struct VlinkParams {
  SaParams sa{100.0, 50, 0.97, 1};
  std::size_t neighbor_tries = 16;
};

struct VlinkResult {
  std::vector<VerticalLink> vlinks;
  double best_cost = 0.0;
  std::vector<double> cost_trace;
};

// Step-4 cost of a link set: w_util * bw x distance + w_peak * peak penalty.
inline double step4_cost(const Problem& p, std::span<const LayerFloorplan> fps, std::span<const VerticalLink> vlinks,
                         std::span<const std::size_t> router_of_hint, const ObjectiveWeights& w) {
  const Network net = build_network(fps, vlinks);
  std::vector<std::size_t> router_of(router_of_hint.begin(), router_of_hint.end());
  if (router_of.empty()) router_of = component_routers(net, p.component_count(), fps);
  try {
    const TrafficEval ev = route_all(net, router_of, p.flows(), p.tech().link_capacity);
    return w.util * ev.bw_times_distance + w.peak * ev.peak_penalty;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Unreachable) throw;
    return std::numeric_limits<double>::max() / 4;
  }
}

inline VlinkResult place_vlinks(const Problem& p, std::span<const LayerFloorplan> fps,
                                std::span<const std::size_t> counts, const ObjectiveWeights& w,
                                const VlinkParams& params) {
  const std::size_t B = fps.size() ? fps.size() - 1 : 0;
  if (counts.size() != B) throw Error(ErrorCode::InvalidParams, "one link count per boundary required");
  const double R = p.tech().rd_max_length;

  std::vector<std::vector<VerticalLink>> cands(B);
  using State = std::vector<std::vector<std::size_t>>;  // chosen candidate ids per boundary
  State init(B);
  for (std::size_t b = 0; b < B; ++b) {
    cands[b] = candidate_links(fps, b, R);
    if (counts[b] == 0) continue;
    if (cands[b].empty()) {
      std::ostringstream msg;
      msg << "boundary " << b << ": no router pair within R = " << R << " mm; R >= " << minimum_reach(fps, b, counts[b])
          << " mm is needed for " << counts[b] << " links";
      throw Error(ErrorCode::NoCandidates, msg.str());
    }
    if (max_matching(cands[b]) < counts[b]) {
      std::ostringstream msg;
      msg << "boundary " << b << ": " << counts[b] << " links requested but at most " << max_matching(cands[b])
          << " disjoint candidates exist within R = " << R << " mm (R >= " << minimum_reach(fps, b, counts[b])
          << " mm would suffice)";
      throw Error(ErrorCode::InsufficientCandidates, msg.str());
    }
    // Greedy start: candidates nearest to the bandwidth-weighted centroid of
    // the boundary's traffic.
    const auto terms = cross_terminals(p, fps, b);
    Point centroid;
    double total = 0.0;
    for (const auto& t : terms) {
      centroid.x += t.bandwidth * t.position.x;
      centroid.y += t.bandwidth * t.position.y;
      total += t.bandwidth;
    }
    if (total > 0.0) centroid = {centroid.x / total, centroid.y / total};
    std::vector<std::size_t> pref(cands[b].size());
    std::iota(pref.begin(), pref.end(), 0);
    auto mid = [&](const VerticalLink& v) {
      const Point a = fps[b].center(v.lower_cell), c = fps[b + 1].center(v.upper_cell);
      return Point{(a.x + c.x) / 2.0, (a.y + c.y) / 2.0};
    };
    std::stable_sort(pref.begin(), pref.end(), [&](std::size_t x, std::size_t y) {
      return manhattan(mid(cands[b][x]), centroid) < manhattan(mid(cands[b][y]), centroid);
    });
    for (std::size_t k : pref) {
      if (init[b].size() == counts[b]) break;
      init[b].push_back(k);
      if (!is_matching(cands[b], init[b])) init[b].pop_back();
    }
    if (init[b].size() < counts[b]) extend_matching(cands[b], init[b], counts[b]);
    std::sort(init[b].begin(), init[b].end());
  }

  auto to_links = [&](const State& s) {
    std::vector<VerticalLink> out;
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t k : s[b]) out.push_back(cands[b][k]);
    return out;
  };
  // Component routers do not depend on the link set.
  const Network base = build_network(fps, {});
  const auto router_of = component_routers(base, p.component_count(), fps);
  auto cost = [&](const State& s) { return step4_cost(p, fps, to_links(s), router_of, w); };

  std::vector<std::size_t> movable;
  for (std::size_t b = 0; b < B; ++b)
    if (counts[b] > 0 && counts[b] < cands[b].size()) movable.push_back(b);
  auto neighbor = [&](const State& s, Rng& rng) {
    if (movable.empty()) return s;
    for (std::size_t t = 0; t < params.neighbor_tries; ++t) {
      const std::size_t b = movable[uniform_index(rng, movable.size())];
      const std::size_t out_pos = uniform_index(rng, s[b].size());
      std::vector<std::size_t> unused;
      for (std::size_t k = 0; k < cands[b].size(); ++k)
        if (!std::binary_search(s[b].begin(), s[b].end(), k)) unused.push_back(k);
      State next = s;
      next[b][out_pos] = unused[uniform_index(rng, unused.size())];
      std::sort(next[b].begin(), next[b].end());
      if (is_matching(cands[b], next[b])) return next;
    }
    return s;
  };

  const auto res = anneal(init, neighbor, cost, params.sa);
  VlinkResult out;
  out.vlinks = to_links(res.best_state);
  out.best_cost = res.best_cost;
  out.cost_trace = res.cost_trace;
  return out;
}

}  // namespace noc3d
