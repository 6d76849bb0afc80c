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


// Global objective
//
//   c = w_area c_area + w_power c_power + w_perf c_perf + w_peak c_peak + w_util c_util
//
// and the reported metrics. evaluate() is the only place a complete solution
// is scored, for the heuristic and the exact baseline alike.

#pragma once

#include <span>
#include <vector>

#include "noc3d/area_kernel.hpp"
#include "noc3d/model.hpp"
#include "noc3d/net_route.hpp"

namespace noc3d {

// Area a cell must provide: component + router (+ any KOZ charged to it).
inline double cell_demand(const Problem& p, const LayerFloorplan& fp, std::size_t cell) {
  double a = fp.koz_charge.empty() ? 0.0 : fp.koz_charge[cell];
  if (fp.occupied(cell)) {
    const RouterPpa& r = p.router(fp.layer);
    a += p.ppa(*fp.cell_of[cell], fp.layer)->area + (is_3d(fp.router_kind[cell]) ? r.area_3d : r.area_2d);
  }
  return a;
}

inline CellDemand layer_demand(const Problem& p, const LayerFloorplan& fp) {
  CellDemand d{fp.dims, std::vector<double>(fp.dims.cells())};
  for (std::size_t i = 0; i < d.demand.size(); ++i) d.demand[i] = cell_demand(p, fp, i);
  return d;
}

inline double whitespace(const Problem& p, const LayerFloorplan& fp) {
  double used = 0.0;
  for (std::size_t i = 0; i < fp.dims.cells(); ++i) used += cell_demand(p, fp, i);
  const double free = fp.area() - used;
  return free > 1e-9 * std::max(1.0, fp.area()) ? free : 0.0;
}

struct CostTerms {
  double area = 0.0;
  double power = 0.0;
  double perf = 0.0;
  double peak = 0.0;
  double util = 0.0;

  double weighted(const ObjectiveWeights& w) const {
    return w.area * area + w.power * power + w.perf * perf + w.peak * peak + w.util * util;
  }
};

struct Evaluation {
  CostTerms terms;
  double total = 0.0;
  std::vector<double> layer_area;
  std::vector<double> layer_whitespace;
  double total_whitespace = 0.0;
  double bw_times_hops = 0.0;
  double max_link_load = 0.0;
  TrafficEval traffic;
  Network network;
};

// Power and perf of the components plus one router per occupied cell.
inline std::pair<double, double> power_perf(const Problem& p, const LayerAssignment& a) {
  double power = 0.0, perf = 0.0;
  for (std::size_t c = 0; c < a.layer_of.size(); ++c) {
    const auto& e = *p.ppa(c, a.layer_of[c]);
    const auto& r = p.router(a.layer_of[c]);
    power += e.power + r.power;
    perf += e.perf + r.perf;
  }
  return {power, perf};
}

inline Evaluation evaluate(const Problem& p, const Solution& s, const ObjectiveWeights& w) {
  check_solution(p, s);
  Evaluation ev;
  for (const auto& fp : s.floorplans) {
    ev.layer_area.push_back(fp.area());
    ev.layer_whitespace.push_back(whitespace(p, fp));
    ev.terms.area += fp.area();
    ev.total_whitespace += ev.layer_whitespace.back();
  }
  std::tie(ev.terms.power, ev.terms.perf) = power_perf(p, s.assignment);
  ev.network = build_network(s.floorplans, s.vlinks);
  const auto router_of = component_routers(ev.network, p.component_count(), s.floorplans);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < p.component_count(); ++c) names.push_back(p.component(c).id);
  ev.traffic = route_all(ev.network, router_of, p.flows(), p.tech().link_capacity, &names);
  ev.terms.peak = ev.traffic.peak_penalty;
  ev.terms.util = ev.traffic.bw_times_distance;
  ev.bw_times_hops = ev.traffic.bw_times_hops;
  ev.max_link_load = ev.traffic.max_link_load;
  ev.total = ev.terms.weighted(w);
  return ev;
}

}  // namespace noc3d
