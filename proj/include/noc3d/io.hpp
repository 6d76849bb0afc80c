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

// JSON documents: coregraph.json, ppa.json, tech.json and solution files.
// schema/instance.schema.json describes the instance files.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include "noc3d/error.hpp"
#include "noc3d/model.hpp"

namespace noc3d {

using json = nlohmann::json;

inline constexpr const char* kNotAvailable = "n.a.";

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedTable, path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

// Runs `fn`, turning JSON type/key errors into MalformedTable.
template <class Fn>
auto parse_guarded(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedTable, what + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Instance files

inline json coregraph_to_json(const CoreGraph& g) {
  json comps = json::array(), flows = json::array();
  for (const auto& c : g.components) comps.push_back({{"id", c.id}, {"kind", c.kind}});
  for (const auto& f : g.flows) flows.push_back({{"src", f.src}, {"dst", f.dst}, {"bandwidth", f.bandwidth}});
  return {{"components", comps}, {"flows", flows}};
}

inline CoreGraph coregraph_from_json(const json& j) {
  return parse_guarded("coregraph", [&] {
    CoreGraph g;
    for (const auto& c : j.at("components")) g.components.push_back({c.at("id").get<std::string>(), c.at("kind").get<std::string>()});
    if (j.contains("flows"))
      for (const auto& f : j.at("flows"))
        g.flows.push_back({f.at("src").get<std::string>(), f.at("dst").get<std::string>(), f.at("bandwidth").get<double>()});
    return g;
  });
}

inline json ppa_to_json(const PpaTable& t) {
  json comps = json::object(), routers = json::object();
  for (const auto& [kind, per_node] : t.components)
    for (const auto& [node, e] : per_node)
      comps[kind][node] = e ? json{{"area", e->area}, {"perf", e->perf}, {"power", e->power}} : json(kNotAvailable);
  for (const auto& [node, r] : t.routers)
    routers[node] = {{"area_2d", r.area_2d}, {"area_3d", r.area_3d}, {"perf", r.perf}, {"power", r.power}};
  return {{"components", comps}, {"routers", routers}};
}

inline PpaTable ppa_from_json(const json& j) {
  return parse_guarded("ppa", [&] {
    PpaTable t;
    for (const auto& [kind, per_node] : j.at("components").items())
      for (const auto& [node, e] : per_node.items()) {
        if (e.is_string()) {
          if (e.get<std::string>() != kNotAvailable)
            throw Error(ErrorCode::MalformedTable, "ppa " + kind + "@" + node + ": expected object or \"n.a.\"");
          t.components[kind][node] = std::nullopt;
        } else {
          t.components[kind][node] = PpaEntry{e.at("area").get<double>(), e.at("perf").get<double>(), e.at("power").get<double>()};
        }
      }
    for (const auto& [node, r] : j.at("routers").items())
      t.routers[node] = {r.at("area_2d").get<double>(), r.at("area_3d").get<double>(), r.at("perf").get<double>(),
                         r.at("power").get<double>()};
    return t;
  });
}

// tech.json also lists the layer stack, bottom first.
inline json tech_to_json(const TechParams& t, const std::vector<Layer>& layers) {
  json ls = json::array();
  for (const auto& l : layers) ls.push_back(l.node);
  return {{"koz_area", t.koz_area}, {"rd_max_length", t.rd_max_length}, {"link_capacity", t.link_capacity}, {"layers", ls}};
}

inline std::pair<TechParams, std::vector<Layer>> tech_from_json(const json& j) {
  return parse_guarded("tech", [&] {
    TechParams t{j.at("koz_area").get<double>(), j.at("rd_max_length").get<double>(), j.at("link_capacity").get<double>()};
    std::vector<Layer> layers;
    for (const auto& n : j.at("layers")) layers.push_back({layers.size(), n.get<std::string>()});
    return std::pair{t, layers};
  });
}

inline Instance instance_from_json(const json& coregraph, const json& ppa, const json& tech) {
  Instance inst;
  inst.graph = coregraph_from_json(coregraph);
  inst.ppa = ppa_from_json(ppa);
  std::tie(inst.tech, inst.layers) = tech_from_json(tech);
  return inst;
}

inline Instance load_instance(const std::filesystem::path& dir) {
  return instance_from_json(read_json_file(dir / "coregraph.json"), read_json_file(dir / "ppa.json"),
                            read_json_file(dir / "tech.json"));
}

inline void save_instance(const std::filesystem::path& dir, const Instance& inst) {
  write_json_file(dir / "coregraph.json", coregraph_to_json(inst.graph));
  write_json_file(dir / "ppa.json", ppa_to_json(inst.ppa));
  write_json_file(dir / "tech.json", tech_to_json(inst.tech, inst.layers));
}

// ---------------------------------------------------------------------------
// Solutions

inline RouterKind router_kind_from_string(const std::string& s) {
  for (auto k : {RouterKind::TwoD, RouterKind::Up, RouterKind::Down, RouterKind::Both})
    if (to_string(k) == s) return k;
  throw Error(ErrorCode::MalformedTable, "unknown router kind '" + s + "'");
}

inline json assignment_to_json(const Problem& p, const LayerAssignment& a) {
  json j = json::object();
  for (std::size_t c = 0; c < a.layer_of.size(); ++c) j[p.component(c).id] = a.layer_of[c];
  return j;
}

inline LayerAssignment assignment_from_json(const Problem& p, const json& j) {
  return parse_guarded("assignment", [&] {
    LayerAssignment a;
    a.layer_of.assign(p.component_count(), 0);
    std::vector<bool> seen(p.component_count(), false);
    for (const auto& [id, layer] : j.items()) {
      auto c = p.component_index(id);
      if (!c) throw Error(ErrorCode::UnknownComponent, "assignment names unknown component '" + id + "'");
      a.layer_of[*c] = layer.get<std::size_t>();
      if (a.layer_of[*c] >= p.layer_count()) throw Error(ErrorCode::MalformedTable, "assignment layer out of range");
      seen[*c] = true;
    }
    for (std::size_t c = 0; c < seen.size(); ++c)
      if (!seen[c]) throw Error(ErrorCode::IncompleteSolution, "assignment misses '" + p.component(c).id + "'");
    return a;
  });
}

inline json floorplan_to_json(const Problem& p, const LayerFloorplan& fp) {
  json cells = json::array(), kinds = json::array();
  for (std::size_t i = 0; i < fp.cell_of.size(); ++i) {
    cells.push_back(fp.cell_of[i] ? json(p.component(*fp.cell_of[i]).id) : json(nullptr));
    kinds.push_back(std::string(to_string(fp.router_kind[i])));
  }
  json j = {{"layer", fp.layer},         {"rows", fp.dims.rows},         {"cols", fp.dims.cols},
          {"cells", cells},              {"col_widths", fp.col_widths}, {"row_heights", fp.row_heights},
          {"router_kind", kinds},        {"koz_charge", fp.koz_charge}, {"width", fp.width()},
          {"height", fp.height()},       {"area", fp.area()}};
  if (fp.origin) j["origin"] = {fp.origin->x, fp.origin->y};
  return j;
}

inline LayerFloorplan floorplan_from_json(const Problem& p, const json& j) {
  return parse_guarded("floorplan", [&] {
    LayerFloorplan fp = empty_floorplan(j.at("layer").get<std::size_t>(),
                                        {j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>()});
    const auto& cells = j.at("cells");
    if (cells.size() != fp.dims.cells()) throw Error(ErrorCode::MalformedTable, "floorplan cell count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].is_null()) continue;
      auto c = p.component_index(cells[i].get<std::string>());
      if (!c) throw Error(ErrorCode::UnknownComponent, "floorplan names unknown component");
      fp.cell_of[i] = *c;
    }
    fp.col_widths = j.at("col_widths").get<std::vector<double>>();
    fp.row_heights = j.at("row_heights").get<std::vector<double>>();
    if (j.contains("router_kind")) {
      const auto& kinds = j.at("router_kind");
      for (std::size_t i = 0; i < kinds.size() && i < fp.router_kind.size(); ++i)
        fp.router_kind[i] = router_kind_from_string(kinds[i].get<std::string>());
    }
    if (j.contains("koz_charge")) fp.koz_charge = j.at("koz_charge").get<std::vector<double>>();
    if (j.contains("origin")) fp.origin = Point{j.at("origin").at(0).get<double>(), j.at("origin").at(1).get<double>()};
    return fp;
  });
}

inline json vlink_to_json(const std::vector<LayerFloorplan>& fps, const VerticalLink& v) {
  const auto& lo = fps[v.boundary];
  const auto& up = fps[v.boundary + 1];
  return {{"boundary", v.boundary},
          {"lower", {{"row", lo.row_of(v.lower_cell)}, {"col", lo.col_of(v.lower_cell)}}},
          {"upper", {{"row", up.row_of(v.upper_cell)}, {"col", up.col_of(v.upper_cell)}}},
          {"rd_length", v.rd_length}};
}

inline VerticalLink vlink_from_json(const std::vector<LayerFloorplan>& fps, const json& j) {
  return parse_guarded("vlink", [&] {
    VerticalLink v;
    v.boundary = j.at("boundary").get<std::size_t>();
    if (v.boundary + 1 >= fps.size()) throw Error(ErrorCode::MalformedTable, "vertical link boundary out of range");
    const auto& lo = fps[v.boundary];
    const auto& up = fps[v.boundary + 1];
    v.lower_cell = lo.cell(j.at("lower").at("row").get<std::size_t>(), j.at("lower").at("col").get<std::size_t>());
    v.upper_cell = up.cell(j.at("upper").at("row").get<std::size_t>(), j.at("upper").at("col").get<std::size_t>());
    v.rd_length = j.at("rd_length").get<double>();
    return v;
  });
}

inline json solution_to_json(const Problem& p, const Solution& s) {
  json fps = json::array(), vls = json::array();
  for (const auto& fp : s.floorplans) fps.push_back(floorplan_to_json(p, fp));
  for (const auto& v : s.vlinks) vls.push_back(vlink_to_json(s.floorplans, v));
  return {{"assignment", assignment_to_json(p, s.assignment)}, {"floorplans", fps}, {"vlinks", vls}};
}

// Accepts a bare solution object or any document embedding one under "solution".
inline Solution solution_from_json(const Problem& p, const json& doc) {
  const json& j = doc.contains("solution") ? doc.at("solution") : doc;
  return parse_guarded("solution", [&] {
    Solution s;
    s.assignment = assignment_from_json(p, j.at("assignment"));
    if (j.contains("floorplans"))
      for (const auto& f : j.at("floorplans")) s.floorplans.push_back(floorplan_from_json(p, f));
    if (j.contains("vlinks"))
      for (const auto& v : j.at("vlinks")) s.vlinks.push_back(vlink_from_json(s.floorplans, v));
    return s;
  });
}

}  // namespace noc3d
