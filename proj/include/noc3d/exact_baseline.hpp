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


// Exact joint optimum for tiny instances, by enumeration of
//
//   layer assignment x cell placement per layer x vertical link matching x
//   KOZ cell per link
//
// with every configuration sized by the area kernel and scored by evaluate().
// The heuristic's solution space is a subset of this one, so the result
// bounds the heuristic from below.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "noc3d/area_kernel.hpp"
#include "noc3d/error.hpp"
#include "noc3d/floorplan_sa.hpp"
#include "noc3d/model.hpp"
#include "noc3d/objective.hpp"
#include "noc3d/vlink_sa.hpp"

namespace noc3d {

struct ExactLimits {
  std::size_t components = 6;
  std::size_t layers = 2;
  std::size_t grid_rows = 2;
  std::size_t grid_cols = 3;
  std::size_t vcands = 6;  // router pairs on a boundary
};

struct ExactResult {
  Solution solution;
  Evaluation evaluation;
  std::size_t visited = 0;  // configurations enumerated
  std::size_t valid = 0;    // of which routable and within reach
};

namespace detail {

inline double falling(std::size_t n, std::size_t k) {
  double v = 1.0;
  for (std::size_t i = 0; i < k; ++i) v *= static_cast<double>(n - i);
  return v;
}

inline double choose(std::size_t n, std::size_t k) { return k > n ? 0.0 : falling(n, k) / falling(k, k); }

// Odometer over assignments, component 0 most significant.
template <class Fn>
void for_each_assignment(const Problem& p, Fn&& fn) {
  const std::size_t n = p.component_count(), L = p.layer_count();
  std::vector<std::size_t> a(n, 0);
  for (;;) {
    bool ok = true;
    for (std::size_t c = 0; c < n && ok; ++c) ok = p.feasible(c, a[c]);
    if (ok) fn(LayerAssignment{a});
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++a[k] < L) break;
      a[k] = 0;
      if (k == 0) return;
    }
    if (n == 0) return;
  }
}

}  // namespace detail

// Configurations the enumeration visits, in closed form.
inline double exact_enumeration_size(const Problem& p) {
  double total = 0.0;
  detail::for_each_assignment(p, [&](const LayerAssignment& a) {
    double v = 1.0;
    std::vector<std::size_t> k(p.layer_count(), 0), g(p.layer_count(), 0);
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
      k[l] = a.members(l).size();
      g[l] = grid_dims_for(k[l]).cells();
      v *= detail::falling(g[l], k[l]);
    }
    for (std::size_t b = 0; b + 1 < p.layer_count(); ++b) {
      double links = 0.0;
      for (std::size_t s = 0; s <= std::min(k[b], k[b + 1]); ++s)
        links += detail::choose(k[b], s) * detail::choose(k[b + 1], s) * detail::falling(s, s) *
                 std::pow(static_cast<double>(g[b + 1]), static_cast<double>(s));
      v *= links;
    }
    total += v;
  });
  return total;
}

inline void check_exact_limits(const Problem& p, const ExactLimits& lim) {
  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << why << " (enumeration would visit about " << exact_enumeration_size(p) << " configurations)";
    throw Error(ErrorCode::InstanceTooLarge, msg.str());
  };
  if (p.component_count() > lim.components) fail(std::to_string(p.component_count()) + " components exceed the limit");
  if (p.layer_count() > lim.layers) fail(std::to_string(p.layer_count()) + " layers exceed the limit");
  detail::for_each_assignment(p, [&](const LayerAssignment& a) {
    std::vector<std::size_t> k(p.layer_count());
    for (std::size_t l = 0; l < p.layer_count(); ++l) {
      k[l] = a.members(l).size();
      const GridDims g = grid_dims_for(k[l]);
      if (g.rows > lim.grid_rows || g.cols > lim.grid_cols) fail("a layer grid exceeds the limit");
    }
    for (std::size_t b = 0; b + 1 < k.size(); ++b)
      if (k[b] * k[b + 1] > lim.vcands) fail("vertical link candidates exceed the limit");
  });
}

inline ExactResult solve_exact(const Problem& p, const ObjectiveWeights& w, const ExactLimits& lim = {}) {
  validate_weights(w);
  check_exact_limits(p, lim);
  const std::size_t L = p.layer_count();
  const double R = p.tech().rd_max_length;

  ExactResult best;
  double best_total = std::numeric_limits<double>::infinity();
  std::map<std::pair<std::size_t, std::vector<double>>, AreaSolution> area_cache;

  detail::for_each_assignment(p, [&](const LayerAssignment& a) {
    std::vector<LayerFloorplan> fps;
    for (std::size_t l = 0; l < L; ++l) fps.push_back(empty_floorplan(l, grid_dims_for(a.members(l).size())));

    std::vector<VerticalLink> links;
    std::vector<std::size_t> koz_cell;

    auto score = [&]() {
      ++best.visited;
      std::vector<LayerFloorplan> sized = fps;
      apply_router_kinds(sized, links);
      for (std::size_t k = 0; k < links.size(); ++k)
        sized[links[k].boundary + 1].koz_charge[koz_cell[k]] += p.tech().koz_area;
      for (auto& fp : sized) {
        if (fp.dims.cells() == 0) continue;
        const CellDemand d = layer_demand(p, fp);
        auto key = std::make_pair(fp.layer, d.demand);
        auto it = area_cache.find(key);
        if (it == area_cache.end()) it = area_cache.emplace(std::move(key), solve_area(d)).first;
        fp.col_widths = it->second.col_widths;
        fp.row_heights = it->second.row_heights;
      }
      std::vector<VerticalLink> placed = links;
      refresh_rd_lengths(sized, placed);
      for (std::size_t k = 0; k < placed.size(); ++k) {
        if (placed[k].rd_length > R + kReachSlack) return;
        const auto& up = sized[placed[k].boundary + 1];
        if (manhattan(up.center(placed[k].upper_cell), up.center(koz_cell[k])) > R + kReachSlack) return;
      }
      Solution s{a, std::move(sized), std::move(placed)};
      Evaluation ev;
      try {
        ev = evaluate(p, s, w);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Unreachable) return;
        throw;
      }
      ++best.valid;
      if (ev.total < best_total) {
        best_total = ev.total;
        best.solution = std::move(s);
        best.evaluation = std::move(ev);
      }
    };

    // Matchings on boundary b, lower routers in cell order; each link also
    // picks the cell that hosts its KOZ.
    std::function<void(std::size_t, std::size_t, std::vector<bool>&)> link_rec =
        [&](std::size_t b, std::size_t lower_pos, std::vector<bool>& upper_used) {
          if (b + 1 >= L) {
            score();
            return;
          }
          const auto lower = fps[b].occupied_cells();
          if (lower_pos == lower.size()) {
            std::vector<bool> next_used(b + 2 < L ? fps[b + 2].dims.cells() : 0, false);
            link_rec(b + 1, 0, next_used);
            return;
          }
          link_rec(b, lower_pos + 1, upper_used);
          const auto& up = fps[b + 1];
          for (std::size_t u : up.occupied_cells()) {
            if (upper_used[u]) continue;
            upper_used[u] = true;
            for (std::size_t kc = 0; kc < up.dims.cells(); ++kc) {
              links.push_back({b, lower[lower_pos], u, 0.0});
              koz_cell.push_back(kc);
              link_rec(b, lower_pos + 1, upper_used);
              links.pop_back();
              koz_cell.pop_back();
            }
            upper_used[u] = false;
          }
        };

    // Injective placements, layer by layer.
    std::function<void(std::size_t, std::size_t)> place_rec = [&](std::size_t l, std::size_t idx) {
      if (l == L) {
        std::vector<bool> used(L > 1 ? fps[1].dims.cells() : 0, false);
        link_rec(0, 0, used);
        return;
      }
      const auto members = a.members(l);
      if (idx == members.size()) {
        place_rec(l + 1, 0);
        return;
      }
      auto& fp = fps[l];
      for (std::size_t cell = 0; cell < fp.dims.cells(); ++cell) {
        if (fp.cell_of[cell]) continue;
        fp.cell_of[cell] = members[idx];
        place_rec(l, idx + 1);
        fp.cell_of[cell] = std::nullopt;
      }
    };
    place_rec(0, 0);
  });
  if (!std::isfinite(best_total))
    throw Error(ErrorCode::SolverFailure, "no routable configuration within the redistribution reach");
  return best;
}

}  // namespace noc3d
