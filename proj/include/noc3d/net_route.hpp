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


// The 3D network: one router per occupied cell, directed mesh links between
// grid-adjacent routers of a layer, and directed vertical links for every
// TSV array. Flows are routed on shortest paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/model.hpp"

namespace noc3d {

inline constexpr std::size_t kNoRouter = static_cast<std::size_t>(-1);

struct Router {
  std::size_t layer = 0;
  std::size_t cell = 0;
  Point center;
};

struct Link {
  std::size_t from = 0;
  std::size_t to = 0;
  double length = 0.0;  // mm
  bool vertical = false;
};

struct Network {
  std::vector<Router> routers;                  // sorted by (layer, row, col)
  std::vector<std::vector<std::size_t>> index;  // [layer][cell] -> router or kNoRouter
  std::vector<Link> links;
  std::vector<std::vector<std::size_t>> out;    // router -> outgoing link ids, by destination router
  std::vector<std::vector<std::size_t>> in;     // router -> incoming link ids

  std::size_t router_at(std::size_t layer, std::size_t cell) const { return index[layer][cell]; }
};

inline Network build_network(std::span<const LayerFloorplan> floorplans, std::span<const VerticalLink> vlinks) {
  Network net;
  net.index.resize(floorplans.size());
  for (const auto& fp : floorplans) {
    auto& idx = net.index[fp.layer];
    idx.assign(fp.dims.cells(), kNoRouter);
    for (std::size_t c = 0; c < fp.dims.cells(); ++c)
      if (fp.occupied(c)) {
        idx[c] = net.routers.size();
        net.routers.push_back({fp.layer, c, fp.center(c)});
      }
  }
  auto add = [&](std::size_t a, std::size_t b, double len, bool vertical) {
    net.links.push_back({a, b, len, vertical});
    net.links.push_back({b, a, len, vertical});
  };
  for (const auto& fp : floorplans) {
    const auto& idx = net.index[fp.layer];
    for (std::size_t r = 0; r < fp.dims.rows; ++r)
      for (std::size_t c = 0; c < fp.dims.cols; ++c) {
        const std::size_t a = idx[fp.cell(r, c)];
        if (a == kNoRouter) continue;
        if (c + 1 < fp.dims.cols && idx[fp.cell(r, c + 1)] != kNoRouter) {
          const std::size_t b = idx[fp.cell(r, c + 1)];
          add(a, b, manhattan(net.routers[a].center, net.routers[b].center), false);
        }
        if (r + 1 < fp.dims.rows && idx[fp.cell(r + 1, c)] != kNoRouter) {
          const std::size_t b = idx[fp.cell(r + 1, c)];
          add(a, b, manhattan(net.routers[a].center, net.routers[b].center), false);
        }
      }
  }
  for (const auto& v : vlinks) {
    const std::size_t a = net.index.at(v.boundary).at(v.lower_cell);
    const std::size_t b = net.index.at(v.boundary + 1).at(v.upper_cell);
    if (a == kNoRouter || b == kNoRouter) throw Error(ErrorCode::IncompleteSolution, "vertical link endpoint has no router");
    add(a, b, v.rd_length, true);
  }
  net.out.assign(net.routers.size(), {});
  net.in.assign(net.routers.size(), {});
  for (std::size_t l = 0; l < net.links.size(); ++l) {
    net.out[net.links[l].from].push_back(l);
    net.in[net.links[l].to].push_back(l);
  }
  for (auto& o : net.out)
    std::sort(o.begin(), o.end(), [&](std::size_t x, std::size_t y) {
      return std::tie(net.links[x].to, net.links[x].length) < std::tie(net.links[y].to, net.links[y].length);
    });
  return net;
}

// Path lengths are compared in integer units of 1e-9 mm so that ties are exact.
inline std::int64_t quantize_length(double mm) { return std::llround(mm * 1e9); }

struct Route {
  std::vector<std::size_t> links;
  double length = 0.0;  // mm
};

struct TrafficEval {
  std::vector<double> load;  // per directed link, Mb/s
  std::vector<Route> routes; // per flow
  double bw_times_distance = 0.0;  // mm * Mb/s
  double bw_times_hops = 0.0;
  double max_link_load = 0.0;
  double peak_penalty = 0.0;  // sum of load above capacity
};

namespace detail {

struct PathKey {
  std::int64_t dist = std::numeric_limits<std::int64_t>::max();
  std::size_t hops = std::numeric_limits<std::size_t>::max();
  auto operator<=>(const PathKey&) const = default;
};

// Shortest (length, hops) from every router to `target`.
inline std::vector<PathKey> distances_to(const Network& net, std::size_t target) {
  std::vector<PathKey> best(net.routers.size());
  using Item = std::pair<PathKey, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  best[target] = {0, 0};
  pq.push({best[target], target});
  while (!pq.empty()) {
    auto [key, u] = pq.top();
    pq.pop();
    if (best[u] < key) continue;
    for (std::size_t l : net.in[u]) {
      const Link& e = net.links[l];
      const PathKey cand{key.dist + quantize_length(e.length), key.hops + 1};
      if (cand < best[e.from]) {
        best[e.from] = cand;
        pq.push({cand, e.from});
      }
    }
  }
  return best;
}

}  // namespace detail

// Shortest path by length, then fewest hops, then lexicographically smallest
// router sequence. Throws Unreachable.
inline Route shortest_route(const Network& net, std::size_t src, std::size_t dst, const std::vector<detail::PathKey>& to_dst) {
  if (to_dst[src].hops == std::numeric_limits<std::size_t>::max())
    throw Error(ErrorCode::Unreachable, "no path between routers " + std::to_string(src) + " and " + std::to_string(dst));
  Route r;
  std::size_t u = src;
  while (u != dst) {
    std::size_t pick = net.links.size();
    for (std::size_t l : net.out[u]) {
      const Link& e = net.links[l];
      const auto& k = to_dst[e.to];
      if (k.hops == std::numeric_limits<std::size_t>::max()) continue;
      if (k.dist + quantize_length(e.length) == to_dst[u].dist && k.hops + 1 == to_dst[u].hops) {
        pick = l;
        break;  // out[u] is sorted by destination router
      }
    }
    r.links.push_back(pick);
    r.length += net.links[pick].length;
    u = net.links[pick].to;
  }
  return r;
}

// Routes every flow; `router_of[c]` is the router hosting component c.
inline TrafficEval route_all(const Network& net, std::span<const std::size_t> router_of,
                             std::span<const IndexedFlow> flows, double link_capacity,
                             const std::vector<std::string>* names = nullptr) {
  TrafficEval ev;
  ev.load.assign(net.links.size(), 0.0);
  std::map<std::size_t, std::vector<detail::PathKey>> cache;
  for (const auto& f : flows) {
    const std::size_t s = router_of[f.src], d = router_of[f.dst];
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, detail::distances_to(net, d)).first;
    Route r;
    try {
      r = shortest_route(net, s, d, it->second);
    } catch (const Error&) {
      const std::string what = names ? (*names)[f.src] + " -> " + (*names)[f.dst]
                                     : std::to_string(f.src) + " -> " + std::to_string(f.dst);
      throw Error(ErrorCode::Unreachable, "flow " + what + " cannot be routed (missing vertical connectivity?)");
    }
    for (std::size_t l : r.links) ev.load[l] += f.bandwidth;
    ev.bw_times_distance += f.bandwidth * r.length;
    ev.bw_times_hops += f.bandwidth * static_cast<double>(r.links.size());
    ev.routes.push_back(std::move(r));
  }
  for (double v : ev.load) {
    ev.max_link_load = std::max(ev.max_link_load, v);
    ev.peak_penalty += std::max(0.0, v - link_capacity);
  }
  return ev;
}

// component -> router, for a complete solution.
inline std::vector<std::size_t> component_routers(const Network& net, std::size_t component_count,
                                                  std::span<const LayerFloorplan> floorplans) {
  const auto where = locate_components(component_count, floorplans);
  std::vector<std::size_t> out(component_count);
  for (std::size_t c = 0; c < component_count; ++c) out[c] = net.router_at(where[c].layer, where[c].cell);
  return out;
}

// Dimension-order (X then Y) routing over one layer's grid, used while the
// full network does not exist yet. Every cell counts as a mesh node and each
// hop spans the two cell centres.
struct XyEval {
  double bw_times_distance = 0.0;
  double peak_penalty = 0.0;
};

inline XyEval route_xy(const LayerFloorplan& fp, std::span<const std::pair<std::size_t, std::size_t>> cell_pairs,
                       std::span<const double> bandwidth, double link_capacity) {
  const std::size_t rows = fp.dims.rows, cols = fp.dims.cols;
  // horizontal: [r][c] east (c->c+1) and west; vertical: [r][c] south (r->r+1) and north
  std::vector<double> east(rows * cols, 0.0), west(rows * cols, 0.0), south(rows * cols, 0.0), north(rows * cols, 0.0);
  XyEval ev;
  for (std::size_t k = 0; k < cell_pairs.size(); ++k) {
    const auto [a, b] = cell_pairs[k];
    const double bw = bandwidth[k];
    ev.bw_times_distance += bw * manhattan(fp.center(a), fp.center(b));
    std::size_t r = fp.row_of(a), c = fp.col_of(a);
    const std::size_t tr = fp.row_of(b), tc = fp.col_of(b);
    while (c < tc) east[r * cols + c++] += bw;
    while (c > tc) west[r * cols + --c] += bw;
    while (r < tr) south[r++ * cols + c] += bw;
    while (r > tr) north[--r * cols + c] += bw;
  }
  for (const auto* v : {&east, &west, &south, &north})
    for (double load : *v) ev.peak_penalty += std::max(0.0, load - link_capacity);
  return ev;
}

}  // namespace noc3d
