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

// Domain model: application core graph, per-layer technology tables and the
// solution representation shared by every synthesis step.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "noc3d/error.hpp"

namespace noc3d {

struct Component {
  std::string id;
  std::string kind;  // e.g. "CPU", "ADC"; keys the PPA table

  bool operator==(const Component&) const = default;
};

// Directed communication demand in Mb/s.
struct Flow {
  std::string src;
  std::string dst;
  double bandwidth = 0.0;

  bool operator==(const Flow&) const = default;
};

struct CoreGraph {
  std::vector<Component> components;
  std::vector<Flow> flows;

  bool operator==(const CoreGraph&) const = default;
};

// Index 0 is the bottom die. Bonding is face-to-back, so the KOZ of a vertical
// link lands on the upper die of its boundary.
struct Layer {
  std::size_t index = 0;
  std::string node;  // technology node name, e.g. "28nm"

  bool operator==(const Layer&) const = default;
};

// Area in mm^2; perf and power are dimensionless relative costs (larger is worse).
struct PpaEntry {
  double area = 0.0;
  double perf = 0.0;
  double power = 0.0;

  bool operator==(const PpaEntry&) const = default;
};

struct RouterPpa {
  double area_2d = 0.0;
  double area_3d = 0.0;
  double perf = 0.0;
  double power = 0.0;

  bool operator==(const RouterPpa&) const = default;
};

struct PpaTable {
  // kind -> node -> entry; nullopt marks a kind that cannot be built in that node.
  std::map<std::string, std::map<std::string, std::optional<PpaEntry>>> components;
  std::map<std::string, RouterPpa> routers;  // node -> router

  bool operator==(const PpaTable&) const = default;
};

struct TechParams {
  double koz_area = 0.0;       // K, mm^2 per TSV array
  double rd_max_length = 0.0;  // R, mm
  double link_capacity = 0.0;  // Mb/s per directed link

  bool operator==(const TechParams&) const = default;
};

struct ObjectiveWeights {
  double area = 1.0;
  double power = 1.0;
  double perf = 1.0;
  double peak = 1.0;
  double util = 1.0;

  bool operator==(const ObjectiveWeights&) const = default;
};

inline void validate_weights(const ObjectiveWeights& w) {
  const double all[] = {w.area, w.power, w.perf, w.peak, w.util};
  bool any = false;
  for (double v : all) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidParams, "weights must be finite and >= 0");
    any = any || v > 0.0;
  }
  if (!any) throw Error(ErrorCode::InvalidParams, "at least one weight must be positive");
}

struct Instance {
  CoreGraph graph;
  PpaTable ppa;
  TechParams tech;
  std::vector<Layer> layers;

  bool operator==(const Instance&) const = default;
};

struct IndexedFlow {
  std::size_t src = 0;
  std::size_t dst = 0;
  double bandwidth = 0.0;
};

inline std::vector<Violation> check_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](ErrorCode c, std::string m) { out.push_back({c, std::move(m)}); };

  std::set<std::string> ids;
  for (const auto& c : inst.graph.components) {
    if (c.id.empty()) add(ErrorCode::MalformedTable, "component with empty id");
    if (!ids.insert(c.id).second) add(ErrorCode::MalformedTable, "duplicate component id '" + c.id + "'");
  }
  for (const auto& f : inst.graph.flows) {
    const std::string name = "flow " + f.src + " -> " + f.dst;
    if (!ids.count(f.src)) add(ErrorCode::UnknownComponent, name + ": unknown source '" + f.src + "'");
    if (!ids.count(f.dst)) add(ErrorCode::UnknownComponent, name + ": unknown destination '" + f.dst + "'");
    if (f.src == f.dst) add(ErrorCode::MalformedTable, name + ": source equals destination");
    if (!(std::isfinite(f.bandwidth) && f.bandwidth > 0.0))
      add(ErrorCode::NegativeBandwidth, name + ": bandwidth must be > 0");
  }

  if (inst.layers.empty()) add(ErrorCode::MalformedTable, "no layers");
  for (std::size_t i = 0; i < inst.layers.size(); ++i) {
    const auto& l = inst.layers[i];
    if (l.index != i) add(ErrorCode::MalformedTable, "layer indices must be contiguous from 0");
    auto it = inst.ppa.routers.find(l.node);
    if (it == inst.ppa.routers.end()) {
      add(ErrorCode::MalformedTable, "no router entry for node '" + l.node + "'");
      continue;
    }
    const RouterPpa& r = it->second;
    // a zero router area is allowed (idealized router); perf and power must be > 0
    bool ok = std::isfinite(r.area_2d) && r.area_2d >= 0.0 && std::isfinite(r.area_3d) && r.area_3d >= 0.0;
    for (double v : {r.perf, r.power}) ok = ok && std::isfinite(v) && v > 0.0;
    if (!ok) add(ErrorCode::MalformedTable, "router values for node '" + l.node + "' out of range");
  }

  std::set<std::string> kinds;
  for (const auto& c : inst.graph.components) kinds.insert(c.kind);
  for (const auto& [kind, per_node] : inst.ppa.components)
    for (const auto& [node, entry] : per_node)
      if (entry && !(std::isfinite(entry->area) && entry->area > 0.0 && std::isfinite(entry->perf) &&
                     entry->perf > 0.0 && std::isfinite(entry->power) && entry->power > 0.0))
        add(ErrorCode::MalformedTable, "PPA entry " + kind + "@" + node + " must be > 0");
  for (const auto& kind : kinds) {
    auto it = inst.ppa.components.find(kind);
    if (it == inst.ppa.components.end()) {
      add(ErrorCode::MalformedTable, "no PPA entry for kind '" + kind + "'");
      continue;
    }
    for (const auto& l : inst.layers)
      if (!it->second.count(l.node))
        add(ErrorCode::MalformedTable, "no PPA entry for kind '" + kind + "' in node '" + l.node + "'");
  }

  const auto& t = inst.tech;
  if (!(std::isfinite(t.koz_area) && t.koz_area >= 0.0)) add(ErrorCode::MalformedTable, "koz_area must be >= 0");
  if (!(std::isfinite(t.rd_max_length) && t.rd_max_length >= 0.0))
    add(ErrorCode::MalformedTable, "rd_max_length must be >= 0");
  if (!(std::isfinite(t.link_capacity) && t.link_capacity > 0.0))
    add(ErrorCode::MalformedTable, "link_capacity must be > 0");

  if (!out.empty()) return out;

  for (const auto& c : inst.graph.components) {
    const auto& per_node = inst.ppa.components.at(c.kind);
    bool feasible = false;
    for (const auto& l : inst.layers) feasible = feasible || per_node.at(l.node).has_value();
    if (!feasible) add(ErrorCode::NoFeasibleLayer, "component '" + c.id + "' has no feasible layer");
  }
  return out;
}

// A validated instance with dense lookup tables. Immutable once constructed.
class Problem {
 public:
  Problem() = default;

  const Instance& instance() const { return inst_; }
  const CoreGraph& graph() const { return inst_.graph; }
  const TechParams& tech() const { return inst_.tech; }
  const std::vector<IndexedFlow>& flows() const { return flows_; }

  std::size_t component_count() const { return inst_.graph.components.size(); }
  std::size_t layer_count() const { return inst_.layers.size(); }
  const Component& component(std::size_t c) const { return inst_.graph.components[c]; }

  const std::optional<PpaEntry>& ppa(std::size_t component, std::size_t layer) const {
    return comp_ppa_[component * layer_count() + layer];
  }
  bool feasible(std::size_t component, std::size_t layer) const { return ppa(component, layer).has_value(); }
  const RouterPpa& router(std::size_t layer) const { return router_ppa_[layer]; }

  std::optional<std::size_t> component_index(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::size_t> feasible_layers(std::size_t component) const {
    std::vector<std::size_t> out;
    for (std::size_t l = 0; l < layer_count(); ++l)
      if (feasible(component, l)) out.push_back(l);
    return out;
  }

  friend Problem validate_instance(Instance inst);

 private:
  Instance inst_;
  std::vector<std::optional<PpaEntry>> comp_ppa_;
  std::vector<RouterPpa> router_ppa_;
  std::vector<IndexedFlow> flows_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws ValidationError listing every violated invariant.
inline Problem validate_instance(Instance inst) {
  if (auto v = check_instance(inst); !v.empty()) throw ValidationError(std::move(v));
  Problem p;
  p.inst_ = std::move(inst);
  const auto& g = p.inst_.graph;
  for (std::size_t i = 0; i < g.components.size(); ++i) p.index_.emplace(g.components[i].id, i);
  for (const auto& c : g.components)
    for (const auto& l : p.inst_.layers) p.comp_ppa_.push_back(p.inst_.ppa.components.at(c.kind).at(l.node));
  for (const auto& l : p.inst_.layers) p.router_ppa_.push_back(p.inst_.ppa.routers.at(l.node));
  for (const auto& f : g.flows) p.flows_.push_back({p.index_.at(f.src), p.index_.at(f.dst), f.bandwidth});
  return p;
}

inline Problem with_graph(const Problem& p, CoreGraph graph) {
  Instance inst = p.instance();
  inst.graph = std::move(graph);
  return validate_instance(std::move(inst));
}

inline Problem with_rd_max(const Problem& p, double rd_max) {
  Instance inst = p.instance();
  inst.tech.rd_max_length = rd_max;
  return validate_instance(std::move(inst));
}

// ---------------------------------------------------------------------------
// Solution representation

struct LayerAssignment {
  std::vector<std::size_t> layer_of;  // indexed by component

  bool operator==(const LayerAssignment&) const = default;

  std::vector<std::size_t> members(std::size_t layer) const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < layer_of.size(); ++c)
      if (layer_of[c] == layer) out.push_back(c);
    return out;
  }
};

enum class RouterKind { TwoD, Up, Down, Both };

inline bool is_3d(RouterKind k) { return k != RouterKind::TwoD; }
inline bool connects_down(RouterKind k) { return k == RouterKind::Down || k == RouterKind::Both; }
inline bool connects_up(RouterKind k) { return k == RouterKind::Up || k == RouterKind::Both; }

inline std::string_view to_string(RouterKind k) {
  switch (k) {
    case RouterKind::TwoD: return "2D";
    case RouterKind::Up: return "3D-up";
    case RouterKind::Down: return "3D-down";
    case RouterKind::Both: return "3D-both";
  }
  return "2D";
}

struct GridDims {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t cells() const { return rows * cols; }
  bool operator==(const GridDims&) const = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline double manhattan(Point a, Point b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

// A layer's mesh: cells are row-major, column i has width col_widths[i] and
// row j has height row_heights[j]; each occupied cell hosts one component and
// its router.
struct LayerFloorplan {
  std::size_t layer = 0;
  GridDims dims;
  std::vector<std::optional<std::size_t>> cell_of;
  std::vector<double> col_widths;
  std::vector<double> row_heights;
  std::vector<RouterKind> router_kind;
  std::vector<double> koz_charge;  // KOZ area (mm^2) charged to each cell
  // Lower-left corner in the stack frame. Unset: the die is centred on the
  // stack axis. Aligned stacks pin every layer to a common corner.
  std::optional<Point> origin;

  bool operator==(const LayerFloorplan&) const = default;

  std::size_t cell(std::size_t row, std::size_t col) const { return row * dims.cols + col; }
  std::size_t row_of(std::size_t cell) const { return cell / dims.cols; }
  std::size_t col_of(std::size_t cell) const { return cell % dims.cols; }
  bool occupied(std::size_t cell) const { return cell_of[cell].has_value(); }

  double width() const {
    double s = 0.0;
    for (double w : col_widths) s += w;
    return s;
  }
  double height() const {
    double s = 0.0;
    for (double h : row_heights) s += h;
    return s;
  }
  double area() const { return width() * height(); }

  Point center(std::size_t cell) const {
    const Point o = corner(cell);
    return {o.x + col_widths[col_of(cell)] / 2.0, o.y + row_heights[row_of(cell)] / 2.0};
  }
  // Lower-left corner of a cell, same frame as center().
  Point corner(std::size_t cell) const {
    const std::size_t r = row_of(cell), c = col_of(cell);
    double x = origin ? origin->x : -width() / 2.0, y = origin ? origin->y : -height() / 2.0;
    for (std::size_t i = 0; i < c; ++i) x += col_widths[i];
    for (std::size_t j = 0; j < r; ++j) y += row_heights[j];
    return {x, y};
  }

  std::vector<std::size_t> occupied_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cell_of.size(); ++i)
      if (cell_of[i]) out.push_back(i);
    return out;
  }
};

inline LayerFloorplan empty_floorplan(std::size_t layer, GridDims dims) {
  LayerFloorplan fp;
  fp.layer = layer;
  fp.dims = dims;
  fp.cell_of.assign(dims.cells(), std::nullopt);
  fp.col_widths.assign(dims.cols, 0.0);
  fp.row_heights.assign(dims.rows, 0.0);
  fp.router_kind.assign(dims.cells(), RouterKind::TwoD);
  fp.koz_charge.assign(dims.cells(), 0.0);
  return fp;
}

// A TSV array connecting the router of `lower_cell` on layer `boundary` with
// the router of `upper_cell` on layer `boundary + 1`.
struct VerticalLink {
  std::size_t boundary = 0;
  std::size_t lower_cell = 0;
  std::size_t upper_cell = 0;
  double rd_length = 0.0;

  bool operator==(const VerticalLink&) const = default;
};

struct Solution {
  LayerAssignment assignment;
  std::vector<LayerFloorplan> floorplans;
  std::vector<VerticalLink> vlinks;

  bool operator==(const Solution&) const = default;
};

struct CellRef {
  std::size_t layer = 0;
  std::size_t cell = 0;
};

// component -> (layer, cell), read from the floorplans.
inline std::vector<CellRef> locate_components(std::size_t component_count,
                                              std::span<const LayerFloorplan> floorplans) {
  std::vector<CellRef> out(component_count);
  std::vector<bool> seen(component_count, false);
  for (const auto& fp : floorplans)
    for (std::size_t i = 0; i < fp.cell_of.size(); ++i)
      if (fp.cell_of[i]) {
        const std::size_t c = *fp.cell_of[i];
        if (c >= component_count || seen[c])
          throw Error(ErrorCode::IncompleteSolution, "component placed twice or out of range");
        seen[c] = true;
        out[c] = {fp.layer, i};
      }
  for (std::size_t c = 0; c < component_count; ++c)
    if (!seen[c]) throw Error(ErrorCode::IncompleteSolution, "component " + std::to_string(c) + " not placed");
  return out;
}

inline std::size_t boundary_count(const Problem& p) { return p.layer_count() ? p.layer_count() - 1 : 0; }

// Router kinds implied by a set of vertical links, written into the floorplans.
inline void apply_router_kinds(std::vector<LayerFloorplan>& floorplans, std::span<const VerticalLink> vlinks) {
  for (auto& fp : floorplans) std::fill(fp.router_kind.begin(), fp.router_kind.end(), RouterKind::TwoD);
  auto mark = [](RouterKind& k, bool up) {
    const bool has_up = connects_up(k) || up, has_down = connects_down(k) || !up;
    k = has_up && has_down ? RouterKind::Both : (has_up ? RouterKind::Up : RouterKind::Down);
  };
  for (const auto& v : vlinks) {
    mark(floorplans[v.boundary].router_kind[v.lower_cell], true);
    mark(floorplans[v.boundary + 1].router_kind[v.upper_cell], false);
  }
}

// Structural checks on a complete solution; throws IncompleteSolution.
inline void check_solution(const Problem& p, const Solution& s) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::IncompleteSolution, m); };
  if (s.assignment.layer_of.size() != p.component_count()) fail("assignment does not cover every component");
  if (s.floorplans.size() != p.layer_count()) fail("one floorplan per layer required");
  for (std::size_t l = 0; l < s.floorplans.size(); ++l) {
    const auto& fp = s.floorplans[l];
    if (fp.layer != l) fail("floorplan layer index mismatch");
    const std::size_t n = fp.dims.cells();
    if (fp.cell_of.size() != n || fp.router_kind.size() != n || fp.koz_charge.size() != n ||
        fp.col_widths.size() != fp.dims.cols || fp.row_heights.size() != fp.dims.rows)
      fail("floorplan " + std::to_string(l) + " has inconsistent sizes");
  }
  auto where = locate_components(p.component_count(), s.floorplans);
  for (std::size_t c = 0; c < where.size(); ++c) {
    if (where[c].layer != s.assignment.layer_of[c]) fail("component '" + p.component(c).id + "' not on its layer");
    if (!p.feasible(c, where[c].layer)) fail("component '" + p.component(c).id + "' on infeasible layer");
  }
  for (const auto& v : s.vlinks) {
    if (v.boundary + 1 >= p.layer_count()) fail("vertical link on nonexistent boundary");
    const auto& lo = s.floorplans[v.boundary];
    const auto& up = s.floorplans[v.boundary + 1];
    if (v.lower_cell >= lo.cell_of.size() || !lo.occupied(v.lower_cell) || v.upper_cell >= up.cell_of.size() ||
        !up.occupied(v.upper_cell))
      fail("vertical link endpoint is not a router");
  }
}

}  // namespace noc3d
