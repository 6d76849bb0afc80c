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


// The five synthesis steps end to end, their configuration and the JSON
// report.

#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noc3d/anneal.hpp"
#include "noc3d/error.hpp"
#include "noc3d/floorplan_sa.hpp"
#include "noc3d/io.hpp"
#include "noc3d/layer_assign.hpp"
#include "noc3d/model.hpp"
#include "noc3d/objective.hpp"
#include "noc3d/tsv_count.hpp"
#include "noc3d/vlink_sa.hpp"

namespace noc3d {

struct PipelineConfig {
  std::uint64_t seed = 1;
  ObjectiveWeights weights;
  SaParams step2{20.0, 120, 0.97, 0};
  SaParams step4{100.0, 50, 0.97, 0};
  std::size_t samples = 64;
  AssignOptions assign;
  std::vector<std::size_t> tsv_counts;                   // per boundary; empty: searched
  std::vector<GridDims> fixed_mesh;                      // per layer, or one for all; empty: sized per layer
  std::map<std::string, std::size_t> fixed_assignment;  // component id -> layer; empty: optimized
  bool no_rd = false;                                    // R = 0 and aligned layers
  bool align = false;                                    // aligned layers, R unchanged
  std::optional<double> rd_max;                          // overrides the instance's R
  int steps = 5;                                         // run steps 1..steps
  std::size_t legalize_rounds = 3;
  bool parallel = true;
};

inline std::string format_dims(GridDims g) { return std::to_string(g.rows) + "x" + std::to_string(g.cols); }

inline GridDims parse_dims(const std::string& s) {
  const auto x = s.find_first_of("xX");
  std::size_t used_r = 0, used_c = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument("no separator");
    const std::string rs = s.substr(0, x), cs = s.substr(x + 1);
    const unsigned long r = std::stoul(rs, &used_r), c = std::stoul(cs, &used_c);
    if (used_r != rs.size() || used_c != cs.size() || r == 0 || c == 0) throw std::invalid_argument("bad");
    return {r, c};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidParams, "mesh size '" + s + "' is not of the form RxC");
  }
}

inline json sa_to_json(const SaParams& p) {
  return {{"initial_temp", p.initial_temp}, {"iterations", p.iterations}, {"cooling", p.cooling}};
}

inline SaParams sa_from_json(const json& j, SaParams base) {
  if (j.contains("initial_temp")) base.initial_temp = j.at("initial_temp").get<double>();
  if (j.contains("iterations")) base.iterations = j.at("iterations").get<std::size_t>();
  if (j.contains("cooling")) base.cooling = j.at("cooling").get<double>();
  return base;
}

inline json weights_to_json(const ObjectiveWeights& w) {
  return {{"area", w.area}, {"power", w.power}, {"perf", w.perf}, {"peak", w.peak}, {"util", w.util}};
}

inline ObjectiveWeights weights_from_json(const json& j) {
  ObjectiveWeights w;
  if (j.is_array()) {
    if (j.size() != 5) throw Error(ErrorCode::InvalidParams, "weights need five values");
    w = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>(), j[4].get<double>()};
  } else {
    w.area = j.value("area", 1.0);
    w.power = j.value("power", 1.0);
    w.perf = j.value("perf", 1.0);
    w.peak = j.value("peak", 1.0);
    w.util = j.value("util", 1.0);
  }
  validate_weights(w);
  return w;
}

inline json config_to_json(const PipelineConfig& c) {
  json mesh = json::array();
  for (const auto& g : c.fixed_mesh) mesh.push_back(format_dims(g));
  json j = {{"seed", c.seed},
            {"weights", weights_to_json(c.weights)},
            {"step2", sa_to_json(c.step2)},
            {"step4", sa_to_json(c.step4)},
            {"samples", c.samples},
            {"step1_perf", c.assign.include_perf},
            {"step1_max_components", c.assign.max_components},
            {"tsv_counts", c.tsv_counts},
            {"fixed_mesh", mesh},
            {"fixed_assignment", c.fixed_assignment},
            {"no_rd", c.no_rd},
            {"align", c.align},
            {"steps", c.steps},
            {"legalize_rounds", c.legalize_rounds}};
  j["rd_max"] = c.rd_max ? json(*c.rd_max) : json(nullptr);
  return j;
}

inline PipelineConfig config_from_json(const json& j, PipelineConfig c = {}) {
  return parse_guarded("config", [&] {
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("weights")) c.weights = weights_from_json(j.at("weights"));
    if (j.contains("step2")) c.step2 = sa_from_json(j.at("step2"), c.step2);
    if (j.contains("step4")) c.step4 = sa_from_json(j.at("step4"), c.step4);
    if (j.contains("samples")) c.samples = j.at("samples").get<std::size_t>();
    if (j.contains("step1_perf")) c.assign.include_perf = j.at("step1_perf").get<bool>();
    if (j.contains("step1_max_components")) c.assign.max_components = j.at("step1_max_components").get<std::size_t>();
    if (j.contains("tsv_counts")) c.tsv_counts = j.at("tsv_counts").get<std::vector<std::size_t>>();
    if (j.contains("fixed_mesh")) {
      c.fixed_mesh.clear();
      const auto& m = j.at("fixed_mesh");
      if (m.is_string()) {
        c.fixed_mesh.push_back(parse_dims(m.get<std::string>()));
      } else {
        for (const auto& s : m) c.fixed_mesh.push_back(parse_dims(s.get<std::string>()));
      }
    }
    if (j.contains("fixed_assignment"))
      c.fixed_assignment = j.at("fixed_assignment").get<std::map<std::string, std::size_t>>();
    if (j.contains("no_rd")) c.no_rd = j.at("no_rd").get<bool>();
    if (j.contains("align")) c.align = j.at("align").get<bool>();
    if (j.contains("rd_max") && !j.at("rd_max").is_null()) c.rd_max = j.at("rd_max").get<double>();
    if (j.contains("steps")) c.steps = j.at("steps").get<int>();
    if (j.contains("legalize_rounds")) c.legalize_rounds = j.at("legalize_rounds").get<std::size_t>();
    return c;
  });
}

inline void validate(const PipelineConfig& c) {
  validate_weights(c.weights);
  SaParams s2 = c.step2, s4 = c.step4;
  validate(s2);
  validate(s4);
  if (c.samples == 0) throw Error(ErrorCode::InvalidParams, "samples must be >= 1");
  if (c.steps < 1 || c.steps > 5) throw Error(ErrorCode::InvalidParams, "steps must be in 1..5");
  if (c.rd_max && !(std::isfinite(*c.rd_max) && *c.rd_max >= 0.0))
    throw Error(ErrorCode::InvalidParams, "rd_max must be >= 0");
}

// ---------------------------------------------------------------------------

struct StepRecord {
  int step = 0;
  std::string name;
  double cost = 0.0;
  json detail = json::object();
};

struct PipelineResult {
  Solution solution;
  std::vector<StepRecord> steps;
  std::vector<TsvPlan> tsv;
  std::vector<std::size_t> tsv_counts;
  std::optional<Evaluation> evaluation;
  std::vector<std::string> warnings;
  std::vector<double> seconds;  // wall clock per step
  json seeds = json::object();
};

// The problem the pipeline actually solves: R overridden by --rd-max / --no-rd.
inline Problem effective_problem(const Problem& p, const PipelineConfig& c) {
  if (c.no_rd) return with_rd_max(p, 0.0);
  if (c.rd_max) return with_rd_max(p, *c.rd_max);
  return p;
}

inline std::vector<std::optional<GridDims>> mesh_per_layer(const Problem& p, const PipelineConfig& c) {
  std::vector<std::optional<GridDims>> out(p.layer_count());
  if (c.fixed_mesh.empty()) return out;
  if (c.fixed_mesh.size() != 1 && c.fixed_mesh.size() != p.layer_count())
    throw Error(ErrorCode::InvalidParams, "fixed mesh needs one size or one per layer");
  for (std::size_t l = 0; l < p.layer_count(); ++l) out[l] = c.fixed_mesh[c.fixed_mesh.size() == 1 ? 0 : l];
  return out;
}

inline LayerAssignment run_step1(const Problem& p, const PipelineConfig& c, StepRecord& rec,
                                 std::vector<std::string>& warnings) {
  LayerAssignment a;
  if (!c.fixed_assignment.empty()) {
    a.layer_of.assign(p.component_count(), 0);
    std::vector<bool> seen(p.component_count(), false);
    for (const auto& [id, layer] : c.fixed_assignment) {
      const auto idx = p.component_index(id);
      if (!idx) throw Error(ErrorCode::UnknownComponent, "fixed assignment names unknown component '" + id + "'");
      if (layer >= p.layer_count() || !p.feasible(*idx, layer))
        throw Error(ErrorCode::NoFeasibleLayer, "fixed assignment puts '" + id + "' on an infeasible layer");
      a.layer_of[*idx] = layer;
      seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw Error(ErrorCode::IncompleteSolution, "fixed assignment misses '" + p.component(i).id + "'");
    rec.detail["method"] = "fixed";
  } else {
    try {
      a = assign_layers(p, c.weights, c.assign);
      rec.detail["method"] = "branch_and_bound";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InstanceTooLarge) throw;
      a = assign_layers_greedy(p, c.weights, c.assign);
      rec.detail["method"] = "greedy";
      warnings.push_back(std::string("step 1: ") + e.detail() + "; used the greedy assignment");
    }
  }
  rec.cost = step1_cost(p, a, c.weights, c.assign);
  return a;
}

inline std::vector<LayerFloorplan> run_step2(const Problem& p, const PipelineConfig& c, const LayerAssignment& a,
                                             StepRecord& rec, json& seeds) {
  FloorplanParams fp;
  fp.sa = c.step2;
  fp.sa.seed = derive_seed(c.seed, 2);
  const auto results = floorplan_all(p, a, c.weights, fp, mesh_per_layer(p, c), c.parallel);
  std::vector<LayerFloorplan> fps;
  json per_layer = json::array(), layer_seeds = json::array();
  for (std::size_t l = 0; l < results.size(); ++l) {
    fps.push_back(results[l].floorplan);
    rec.cost += results[l].best_cost;
    per_layer.push_back({{"layer", l}, {"c2", results[l].best_cost}, {"area", results[l].floorplan.area()}});
    layer_seeds.push_back(derive_seed(fp.sa.seed, 2, l));
  }
  if (c.no_rd || c.align) align_layers(fps);
  rec.detail["layers"] = per_layer;
  seeds["step2"] = layer_seeds;
  return fps;
}

// Per-boundary link counts, capped by how many disjoint candidates exist.
inline std::vector<std::size_t> run_step3(const Problem& p, const PipelineConfig& c,
                                          const std::vector<LayerFloorplan>& fps, StepRecord& rec,
                                          std::vector<TsvPlan>& plans, std::vector<std::string>& warnings,
                                          json& seeds) {
  const std::size_t B = boundary_count(p);
  if (!c.tsv_counts.empty() && c.tsv_counts.size() != B)
    throw Error(ErrorCode::InvalidParams, "tsv_counts needs one entry per boundary");
  TsvParams tp;
  tp.samples = c.samples;
  tp.seed = derive_seed(c.seed, 3);
  seeds["step3"] = tp.seed;
  std::vector<std::size_t> counts(B, 0);
  json detail = json::array();
  for (std::size_t b = 0; b < B; ++b) {
    std::size_t want;
    if (!c.tsv_counts.empty()) {
      want = c.tsv_counts[b];
      TsvPlan fixed;
      fixed.boundary = b;
      fixed.count = want;
      plans.push_back(fixed);
    } else {
      plans.push_back(choose_count(p, fps, b, c.weights, tp));
      want = plans.back().count;
      rec.cost += plans.back().c3;
    }
    const auto cands = candidate_links(fps, b, p.tech().rd_max_length);
    const std::size_t cap = max_matching(cands);
    const bool needed = !cross_terminals(p, fps, b).empty();
    if (needed && cap == 0) {
      std::ostringstream msg;
      msg << "boundary " << b << " carries traffic but no router pair lies within R = " << p.tech().rd_max_length
          << " mm; R >= " << minimum_reach(fps, b, std::max<std::size_t>(want, 1)) << " mm is needed";
      throw Error(ErrorCode::NoCandidates, msg.str());
    }
    if (want > cap) {
      std::ostringstream msg;
      msg << "step 3: boundary " << b << " count " << want << " capped to " << cap << " disjoint candidates";
      warnings.push_back(msg.str());
      want = cap;
    }
    counts[b] = want;
    detail.push_back({{"boundary", b}, {"count", want}, {"candidates", cands.size()}, {"max_disjoint", cap}});
  }
  rec.detail["boundaries"] = detail;
  return counts;
}

inline std::vector<VerticalLink> run_step4(const Problem& p, const PipelineConfig& c,
                                           const std::vector<LayerFloorplan>& fps, const std::vector<std::size_t>& counts,
                                           StepRecord& rec, json& seeds, std::uint64_t round = 0) {
  VlinkParams vp;
  vp.sa = c.step4;
  vp.sa.seed = derive_seed(c.seed, 4, round);
  if (round == 0) seeds["step4"] = vp.sa.seed;
  const auto res = place_vlinks(p, fps, counts, c.weights, vp);
  rec.cost = res.best_cost;
  rec.detail["initial_cost"] = res.cost_trace.front();
  return res.vlinks;
}

// Links whose RD length or KOZ lies out of reach.
inline std::vector<std::string> reach_violations(const Problem& p, const std::vector<LayerFloorplan>& fps,
                                                 const std::vector<VerticalLink>& vlinks) {
  std::vector<std::string> out;
  const double R = p.tech().rd_max_length;
  for (std::size_t k = 0; k < vlinks.size(); ++k) {
    const auto& v = vlinks[k];
    if (v.rd_length > R + kReachSlack) {
      std::ostringstream msg;
      msg << "vertical link " << k << " on boundary " << v.boundary << " has RD length " << v.rd_length << " > R";
      out.push_back(msg.str());
    }
  }
  for (const auto& fp : fps)
    for (std::size_t cell = 0; cell < fp.dims.cells(); ++cell) {
      if (fp.koz_charge[cell] <= 0.0) continue;
      // every KOZ belongs to some downward router in reach
      bool ok = false;
      for (std::size_t r = 0; r < fp.dims.cells() && !ok; ++r)
        ok = fp.occupied(r) && connects_down(fp.router_kind[r]) &&
             manhattan(fp.center(r), fp.center(cell)) <= R + kReachSlack;
      if (!ok) out.push_back("KOZ in layer " + std::to_string(fp.layer) + " cell " + std::to_string(cell) + " out of reach");
    }
  return out;
}

inline LegalizeOptions legalize_options(const PipelineConfig& c) { return {!c.no_rd, c.no_rd || c.align}; }

inline PipelineResult run_pipeline(const Problem& input, const PipelineConfig& config) {
  validate(config);
  const Problem p = effective_problem(input, config);
  PipelineResult out;
  out.seeds["run"] = config.seed;
  using clock = std::chrono::steady_clock;
  auto timed = [&](int step, const char* name, auto&& fn) {
    const auto t0 = clock::now();
    StepRecord rec;
    rec.step = step;
    rec.name = name;
    try {
      fn(rec);
    } catch (const ValidationError&) {
      throw;
    } catch (const Error& e) {
      throw e.at_step(step);
    }
    out.seconds.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    out.steps.push_back(std::move(rec));
  };

  timed(1, "assign", [&](StepRecord& r) { out.solution.assignment = run_step1(p, config, r, out.warnings); });
  if (config.steps < 2) return out;
  timed(2, "floorplan", [&](StepRecord& r) {
    out.solution.floorplans = run_step2(p, config, out.solution.assignment, r, out.seeds);
  });
  if (config.steps < 3) return out;
  timed(3, "tsv_count", [&](StepRecord& r) {
    out.tsv_counts = run_step3(p, config, out.solution.floorplans, r, out.tsv, out.warnings, out.seeds);
  });
  if (config.steps < 4) return out;
  timed(4, "place3d", [&](StepRecord& r) {
    out.solution.vlinks = run_step4(p, config, out.solution.floorplans, out.tsv_counts, r, out.seeds);
  });
  if (config.steps < 5) return out;
  timed(5, "legalize", [&](StepRecord& r) {
    auto fps = legalize(p, out.solution.floorplans, out.solution.vlinks, legalize_options(config));
    auto violations = reach_violations(p, fps, out.solution.vlinks);
    std::size_t round = 0;
    // Legalization moves router centres; re-place links on the new geometry
    // while any link is out of reach.
    while (!violations.empty() && round < config.legalize_rounds) {
      ++round;
      std::vector<std::size_t> counts = out.tsv_counts;
      for (std::size_t b = 0; b < counts.size(); ++b)
        counts[b] = std::min(counts[b], max_matching(candidate_links(fps, b, p.tech().rd_max_length)));
      StepRecord redo;
      auto links = run_step4(p, config, fps, counts, redo, out.seeds, round);
      auto next = legalize(p, fps, links, legalize_options(config));
      out.solution.vlinks = std::move(links);
      fps = std::move(next);
      violations = reach_violations(p, fps, out.solution.vlinks);
    }
    out.solution.floorplans = std::move(fps);
    r.detail["repair_rounds"] = round;
    for (auto& v : violations) out.warnings.push_back("step 5: " + v);
    r.detail["reach_violations"] = violations.size();
    double area = 0.0;
    for (const auto& fp : out.solution.floorplans) area += fp.area();
    r.cost = area;
  });
  out.evaluation = evaluate(p, out.solution, config.weights);
  return out;
}

// ---------------------------------------------------------------------------
// Report

inline json metrics_to_json(const Evaluation& ev, const Solution& s) {
  double max_rd = 0.0;
  for (const auto& v : s.vlinks) max_rd = std::max(max_rd, v.rd_length);
  return {{"total_cost", ev.total},
          {"terms", {{"area", ev.terms.area}, {"power", ev.terms.power}, {"perf", ev.terms.perf},
                     {"peak", ev.terms.peak}, {"util", ev.terms.util}}},
          {"layer_area", ev.layer_area},
          {"total_area", ev.terms.area},
          {"layer_whitespace", ev.layer_whitespace},
          {"total_whitespace", ev.total_whitespace},
          {"bw_times_distance", ev.terms.util},
          {"bw_times_hops", ev.bw_times_hops},
          {"max_link_load", ev.max_link_load},
          {"peak_penalty", ev.terms.peak},
          {"power", ev.terms.power},
          {"perf", ev.terms.perf},
          {"vlink_count", s.vlinks.size()},
          {"max_rd_length", max_rd}};
}

inline json traffic_to_json(const Evaluation& ev) {
  json links = json::array();
  for (std::size_t l = 0; l < ev.network.links.size(); ++l) {
    const auto& e = ev.network.links[l];
    const auto& a = ev.network.routers[e.from];
    const auto& b = ev.network.routers[e.to];
    links.push_back({{"from", {a.layer, a.cell}}, {"to", {b.layer, b.cell}}, {"length", e.length},
                     {"vertical", e.vertical}, {"load", ev.traffic.load[l]}});
  }
  return {{"links", links}};
}

inline json instance_to_json(const Instance& inst) {
  return {{"coregraph", coregraph_to_json(inst.graph)},
          {"ppa", ppa_to_json(inst.ppa)},
          {"tech", tech_to_json(inst.tech, inst.layers)}};
}

inline json tsv_to_json(const std::vector<TsvPlan>& plans, const std::vector<std::size_t>& counts) {
  json out = json::array();
  for (std::size_t b = 0; b < plans.size(); ++b) {
    json curve = json::array();
    for (const auto& e : plans[b].curve)
      curve.push_back({{"count", e.count}, {"c3", e.c3}, {"expected_bd", e.expected_bd},
                       {"array_bandwidth", e.bandwidth}, {"array_distance", e.distance}});
    out.push_back({{"boundary", plans[b].boundary},
                   {"chosen", plans[b].count},
                   {"used", b < counts.size() ? counts[b] : plans[b].count},
                   {"c3", plans[b].c3},
                   {"curve", curve}});
  }
  return out;
}

// Timing lives in its own top-level object so reports can be compared
// without it.
inline json report_to_json(const Problem& input, const PipelineConfig& c, const PipelineResult& r) {
  const Problem p = effective_problem(input, c);
  json steps = json::array(), timing = json::object();
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    steps.push_back({{"step", r.steps[k].step}, {"name", r.steps[k].name}, {"cost", r.steps[k].cost},
                     {"detail", r.steps[k].detail}});
    timing["step" + std::to_string(r.steps[k].step) + "_seconds"] = r.seconds[k];
  }
  json rep = {{"instance", instance_to_json(input.instance())},
              {"effective_rd_max", p.tech().rd_max_length},
              {"config", config_to_json(c)},
              {"seeds", r.seeds},
              {"steps", steps},
              {"tsv", tsv_to_json(r.tsv, r.tsv_counts)},
              {"warnings", r.warnings},
              {"timing", timing}};
  json sol = {{"assignment", assignment_to_json(p, r.solution.assignment)}};
  if (!r.solution.floorplans.empty()) {
    sol = solution_to_json(p, r.solution);
  }
  rep["solution"] = sol;
  if (r.evaluation) rep["metrics"] = metrics_to_json(*r.evaluation, r.solution);
  return rep;
}

// Re-evaluates the solution embedded in a report against the embedded
// instance and weights.
struct ReportEvaluation {
  Problem problem;
  Solution solution;
  Evaluation evaluation;
  json metrics;
};

inline ReportEvaluation evaluate_report(const json& rep) {
  return parse_guarded("report", [&] {
    const auto& inst = rep.at("instance");
    Instance i = instance_from_json(inst.at("coregraph"), inst.at("ppa"), inst.at("tech"));
    i.tech.rd_max_length = rep.at("effective_rd_max").get<double>();
    ReportEvaluation out{validate_instance(std::move(i)), {}, {}, {}};
    const ObjectiveWeights w = weights_from_json(rep.at("config").at("weights"));
    out.solution = solution_from_json(out.problem, rep.at("solution"));
    out.evaluation = evaluate(out.problem, out.solution, w);
    out.metrics = metrics_to_json(out.evaluation, out.solution);
    return out;
  });
}

}  // namespace noc3d
