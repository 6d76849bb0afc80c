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


// noc3d: command-line front end.
//
//   noc3d validate  DIR
//   noc3d assign    DIR                      -> assignment.json
//   noc3d floorplan DIR [--in assignment]    -> floorplan.json, layer*.svg
//   noc3d tsv       DIR --in floorplan.json  -> tsv_plan.json
//   noc3d place3d   DIR --in floorplan.json [--tsv tsv_plan.json] -> vlinks.json
//   noc3d legalize  DIR --in vlinks.json     -> legalized.json
//   noc3d eval      DIR --in solution.json | --report report.json -> traffic.json
//   noc3d run       DIR                      -> report.json
//   noc3d baseline  DIR                      -> exact_solution.json
//   noc3d render    DIR --in solution.json   -> layer*.svg
//
// DIR holds coregraph.json, ppa.json and tech.json. Exit codes: 0 ok,
// 2 invalid input, 3 infeasible, 4 limits exceeded.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "noc3d/noc3d.hpp"

namespace fs = std::filesystem;
using namespace noc3d;

namespace {

struct Options {
  std::string instance_dir;
  std::string out_dir = ".";
  std::string config_file;
  std::string input;
  std::string report;
  std::string tsv_plan;
  std::string weights;
  std::string fixed_mesh;
  std::uint64_t seed = 1;
  bool seed_set = false;
  int steps = 5;
  bool no_rd = false;
  bool align = false;
  double rd_max = -1.0;
  bool svg = true;
};

ObjectiveWeights parse_weights(const std::string& s) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidParams, "bad weight '" + item + "'");
    }
  }
  if (v.size() != 5) throw Error(ErrorCode::InvalidParams, "--weights needs five comma-separated values");
  ObjectiveWeights w{v[0], v[1], v[2], v[3], v[4]};
  validate_weights(w);
  return w;
}

PipelineConfig build_config(const Options& o) {
  PipelineConfig c;
  if (!o.config_file.empty()) c = config_from_json(read_json_file(o.config_file));
  if (o.seed_set) c.seed = o.seed;
  if (!o.weights.empty()) c.weights = parse_weights(o.weights);
  if (!o.fixed_mesh.empty()) {
    c.fixed_mesh.clear();
    std::stringstream in(o.fixed_mesh);
    std::string item;
    while (std::getline(in, item, ',')) c.fixed_mesh.push_back(parse_dims(item));
  }
  if (o.no_rd) c.no_rd = true;
  if (o.align) c.align = true;
  if (o.rd_max >= 0.0) c.rd_max = o.rd_max;
  c.steps = o.steps;
  validate(c);
  return c;
}

Problem load_problem(const Options& o) { return validate_instance(load_instance(o.instance_dir)); }

fs::path out_path(const Options& o, const std::string& name) { return fs::path(o.out_dir) / name; }

void write_svgs(const Options& o, const Problem& p, const Solution& s) {
  if (!o.svg) return;
  for (std::size_t l = 0; l < s.floorplans.size(); ++l)
    write_text_file(out_path(o, "layer" + std::to_string(l) + ".svg"), render_layer_svg(p, s.floorplans, s.vlinks, l));
}

Solution load_solution(const Problem& p, const std::string& file) {
  if (file.empty()) throw Error(ErrorCode::InvalidParams, "this command needs --in <solution.json>");
  return solution_from_json(p, read_json_file(file));
}

void say(const std::string& s) { std::cout << s << "\n"; }

int cmd_validate(const Options& o) {
  const Problem p = load_problem(o);
  std::ostringstream msg;
  msg << "valid: " << p.component_count() << " components, " << p.flows().size() << " flows, " << p.layer_count()
      << " layers";
  say(msg.str());
  for (std::size_t c = 0; c < p.component_count(); ++c) {
    std::string layers;
    for (std::size_t l : p.feasible_layers(c)) layers += (layers.empty() ? "" : ",") + std::to_string(l);
    say("  " + p.component(c).id + " (" + p.component(c).kind + "): layers {" + layers + "}");
  }
  return 0;
}

int cmd_assign(const Options& o) {
  const Problem p0 = load_problem(o);
  PipelineConfig c = build_config(o);
  c.steps = 1;
  const auto r = run_pipeline(p0, c);
  write_json_file(out_path(o, "assignment.json"),
                  {{"assignment", assignment_to_json(p0, r.solution.assignment)}, {"c1", r.steps[0].cost},
                   {"method", r.steps[0].detail["method"]}, {"warnings", r.warnings}});
  say("C1 = " + std::to_string(r.steps[0].cost));
  return 0;
}

int cmd_floorplan(const Options& o) {
  const Problem p0 = load_problem(o);
  PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  Solution s;
  StepRecord rec;
  std::vector<std::string> warnings;
  json seeds;
  if (o.input.empty()) {
    s.assignment = run_step1(p, c, rec, warnings);
  } else {
    const json doc = read_json_file(o.input);
    s.assignment = assignment_from_json(p, doc.contains("assignment") ? doc.at("assignment") : doc);
  }
  StepRecord r2;
  s.floorplans = run_step2(p, c, s.assignment, r2, seeds);
  write_json_file(out_path(o, "floorplan.json"), {{"solution", solution_to_json(p, s)}, {"c2", r2.cost}, {"seeds", seeds}});
  write_svgs(o, p, s);
  say("C2 = " + std::to_string(r2.cost));
  return 0;
}

int cmd_tsv(const Options& o) {
  const Problem p0 = load_problem(o);
  PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  const Solution s = load_solution(p, o.input);
  StepRecord rec;
  std::vector<TsvPlan> plans;
  std::vector<std::string> warnings;
  json seeds;
  const auto counts = run_step3(p, c, s.floorplans, rec, plans, warnings, seeds);
  write_json_file(out_path(o, "tsv_plan.json"),
                  {{"counts", counts}, {"boundaries", tsv_to_json(plans, counts)}, {"warnings", warnings}, {"seeds", seeds}});
  for (std::size_t b = 0; b < counts.size(); ++b)
    say("boundary " + std::to_string(b) + ": " + std::to_string(counts[b]) + " TSV arrays");
  return 0;
}

int cmd_place3d(const Options& o) {
  const Problem p0 = load_problem(o);
  PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  Solution s = load_solution(p, o.input);
  std::vector<std::size_t> counts;
  if (!o.tsv_plan.empty()) {
    counts = read_json_file(o.tsv_plan).at("counts").get<std::vector<std::size_t>>();
  } else {
    StepRecord rec;
    std::vector<TsvPlan> plans;
    std::vector<std::string> warnings;
    json seeds;
    counts = run_step3(p, c, s.floorplans, rec, plans, warnings, seeds);
  }
  StepRecord rec;
  json seeds;
  s.vlinks = run_step4(p, c, s.floorplans, counts, rec, seeds);
  apply_router_kinds(s.floorplans, s.vlinks);
  write_json_file(out_path(o, "vlinks.json"), {{"solution", solution_to_json(p, s)}, {"c4", rec.cost}, {"seeds", seeds}});
  say("vertical links: " + std::to_string(s.vlinks.size()));
  return 0;
}

int cmd_legalize(const Options& o) {
  const Problem p0 = load_problem(o);
  PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  Solution s = load_solution(p, o.input);
  s.floorplans = legalize(p, s.floorplans, s.vlinks, legalize_options(c));
  const auto violations = reach_violations(p, s.floorplans, s.vlinks);
  write_json_file(out_path(o, "legalized.json"), {{"solution", solution_to_json(p, s)}, {"reach_violations", violations}});
  write_svgs(o, p, s);
  for (const auto& v : violations) std::cerr << "warning: " << v << "\n";
  return 0;
}

int cmd_eval(const Options& o) {
  if (!o.report.empty()) {
    const json rep = read_json_file(o.report);
    const ReportEvaluation r = evaluate_report(rep);
    json doc = traffic_to_json(r.evaluation);
    doc["metrics"] = r.metrics;
    write_json_file(out_path(o, "traffic.json"), doc);
    say(r.metrics.dump(2));
    if (!rep.contains("metrics")) return 0;
    if (rep.at("metrics") != r.metrics) {
      std::cerr << "metrics differ from the report\n";
      return 1;
    }
    say("metrics match the report");
    return 0;
  }
  if (o.instance_dir.empty()) throw Error(ErrorCode::InvalidParams, "eval needs an instance directory or --report");
  const Problem p0 = load_problem(o);
  const PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  const Solution s = load_solution(p, o.input);
  const Evaluation ev = evaluate(p, s, c.weights);
  const json metrics = metrics_to_json(ev, s);
  json doc = traffic_to_json(ev);
  doc["metrics"] = metrics;
  write_json_file(out_path(o, "traffic.json"), doc);
  say(metrics.dump(2));
  return 0;
}

int cmd_run(const Options& o) {
  const Problem p = load_problem(o);
  const PipelineConfig c = build_config(o);
  const auto r = run_pipeline(p, c);
  write_json_file(out_path(o, "report.json"), report_to_json(p, c, r));
  if (!r.solution.floorplans.empty()) write_svgs(o, effective_problem(p, c), r.solution);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (r.evaluation) {
    std::ostringstream msg;
    msg << "total cost " << r.evaluation->total << ", area " << r.evaluation->terms.area << " mm^2, whitespace "
        << r.evaluation->total_whitespace << " mm^2, bw x distance " << r.evaluation->terms.util << " mm*Mb/s, "
        << r.solution.vlinks.size() << " vertical links";
    say(msg.str());
  }
  return 0;
}

int cmd_baseline(const Options& o) {
  const Problem p0 = load_problem(o);
  const PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  const auto r = solve_exact(p, c.weights);
  write_json_file(out_path(o, "exact_solution.json"),
                  {{"solution", solution_to_json(p, r.solution)},
                   {"metrics", metrics_to_json(r.evaluation, r.solution)},
                   {"visited", r.visited},
                   {"valid", r.valid},
                   {"weights", weights_to_json(c.weights)}});
  say("exact total cost " + std::to_string(r.evaluation.total) + " over " + std::to_string(r.visited) +
      " configurations");
  return 0;
}

int cmd_render(const Options& o) {
  const Problem p0 = load_problem(o);
  const PipelineConfig c = build_config(o);
  const Problem p = effective_problem(p0, c);
  Options with_svg = o;
  with_svg.svg = true;
  write_svgs(with_svg, p, load_solution(p, o.input));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D NoC synthesis for heterogeneous layer stacks"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    auto* instance = sub->add_option("instance", o.instance_dir, "directory with coregraph.json, ppa.json, tech.json");
    if (sub->get_name() != "eval") instance->required();  // eval --report carries its own instance
    sub->add_option("--out", o.out_dir, "output directory");
    sub->add_option("--config", o.config_file, "pipeline configuration (JSON)");
    sub->add_option("--seed", o.seed, "run seed")->each([&](const std::string&) { o.seed_set = true; });
    sub->add_option("--weights", o.weights, "objective weights area,power,perf,peak,util");
    sub->add_option("--fixed-mesh", o.fixed_mesh, "mesh size per layer, RxC (one value or a comma list)");
    sub->add_flag("--no-rd", o.no_rd, "no redistribution: R = 0 and aligned layers");
    sub->add_flag("--align", o.align, "aligned layers, R unchanged");
    sub->add_option("--rd-max", o.rd_max, "maximum RD length R in mm");
    sub->add_flag("!--no-svg", o.svg, "skip SVG output");
  };
  auto add_input = [&](CLI::App* sub) { sub->add_option("--in,--solution", o.input, "input document"); };

  std::map<std::string, std::function<int(const Options&)>> handlers = {
      {"validate", cmd_validate}, {"assign", cmd_assign},     {"floorplan", cmd_floorplan}, {"tsv", cmd_tsv},
      {"place3d", cmd_place3d},   {"legalize", cmd_legalize}, {"eval", cmd_eval},           {"run", cmd_run},
      {"baseline", cmd_baseline}, {"render", cmd_render}};
  const std::map<std::string, std::string> help = {
      {"validate", "check instance files"},
      {"assign", "step 1: layer assignment"},
      {"floorplan", "step 2: per-layer floorplans"},
      {"tsv", "step 3: TSV array count per boundary"},
      {"place3d", "step 4: vertical link placement"},
      {"legalize", "step 5: legalization"},
      {"eval", "route and score a solution"},
      {"run", "all steps and the final report"},
      {"baseline", "exact optimum of a tiny instance"},
      {"render", "SVG per layer"}};
  for (const auto& [name, text] : help) {
    CLI::App* sub = app.add_subcommand(name, text);
    add_common(sub);
    if (name != "validate" && name != "assign" && name != "run" && name != "baseline") add_input(sub);
    if (name == "place3d") sub->add_option("--tsv", o.tsv_plan, "tsv_plan.json with fixed counts");
    if (name == "eval") sub->add_option("--report", o.report, "report.json to re-evaluate");
    if (name == "run") sub->add_option("--steps", o.steps, "run steps 1..N")->check(CLI::Range(1, 5));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    for (const auto* sub : app.get_subcommands()) return handlers.at(sub->get_name())(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (const auto* v = dynamic_cast<const ValidationError*>(&e))
      for (const auto& x : v->violations()) std::cerr << "  " << to_string(x.code) << ": " << x.message << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
