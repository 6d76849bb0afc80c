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

#include <gtest/gtest.h>

#include <random>

#include "noc3d/corpus.hpp"
#include "noc3d/io.hpp"
#include "noc3d/model.hpp"

namespace noc3d {
namespace {

bool has_code(const std::vector<Violation>& v, ErrorCode c) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.code == c; });
}

Instance adc_cpu() {
  Instance inst;
  inst.graph.components = {{"adc", "ADC"}, {"cpu", "CPU"}};
  inst.graph.flows = {{"adc", "cpu", 10.0}};
  inst.ppa = corpus::vsoc_ppa();
  inst.tech = corpus::vsoc_tech(100.0);
  inst.layers = corpus::make_layers({"28nm", "45nm"});
  return inst;
}

TEST(Model, AdcFeasibleOnlyInMixedSignalLayer) {
  const Problem p = validate_instance(adc_cpu());
  EXPECT_EQ(p.feasible_layers(0), (std::vector<std::size_t>{1}));
  EXPECT_EQ(p.feasible_layers(1), (std::vector<std::size_t>{0, 1}));
  EXPECT_DOUBLE_EQ(p.ppa(0, 1)->area, 53.0);
}

TEST(Model, ZeroBandwidthRejected) {
  Instance inst = adc_cpu();
  inst.graph.flows[0].bandwidth = 0.0;
  try {
    validate_instance(inst);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeBandwidth);
  }
}

TEST(Model, EmptyGraphIsValid) {
  Instance inst = adc_cpu();
  inst.graph = {};
  const Problem p = validate_instance(inst);
  EXPECT_EQ(p.component_count(), 0u);
  EXPECT_TRUE(p.flows().empty());
}

TEST(Model, NoFeasibleLayerNamesComponent) {
  Instance inst = adc_cpu();
  inst.layers = corpus::make_layers({"28nm"});
  try {
    validate_instance(inst);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFeasibleLayer);
    EXPECT_NE(std::string(e.what()).find("adc"), std::string::npos);
  }
}

TEST(Model, UnknownEndpoint) {
  Instance inst = adc_cpu();
  inst.graph.flows.push_back({"cpu", "ghost", 1.0});
  EXPECT_TRUE(has_code(check_instance(inst), ErrorCode::UnknownComponent));
}

TEST(Model, WeightsValidation) {
  EXPECT_NO_THROW(validate_weights({}));
  EXPECT_THROW(validate_weights({0, 0, 0, 0, 0}), Error);
  EXPECT_THROW(validate_weights({1, -1, 0, 0, 0}), Error);
}

TEST(Model, RouterKindsFromLinks) {
  std::vector<LayerFloorplan> fps = {empty_floorplan(0, {1, 2}), empty_floorplan(1, {1, 2}), empty_floorplan(2, {1, 2})};
  std::vector<VerticalLink> v = {{0, 0, 1, 0.0}, {1, 1, 0, 0.0}};
  apply_router_kinds(fps, v);
  EXPECT_EQ(fps[0].router_kind[0], RouterKind::Up);
  EXPECT_EQ(fps[0].router_kind[1], RouterKind::TwoD);
  EXPECT_EQ(fps[1].router_kind[1], RouterKind::Both);
  EXPECT_EQ(fps[2].router_kind[0], RouterKind::Down);
}

// Round-trip through the JSON files for the whole corpus.
TEST(Model, InstanceRoundTrip) {
  for (const Instance& inst : {corpus::tiny_soc(), corpus::small_vsoc(), corpus::large_vsoc(), corpus::vopd()}) {
    const json a = coregraph_to_json(inst.graph), b = ppa_to_json(inst.ppa), c = tech_to_json(inst.tech, inst.layers);
    const Instance back = instance_from_json(json::parse(a.dump()), json::parse(b.dump()), json::parse(c.dump()));
    EXPECT_EQ(back, inst);
    EXPECT_EQ(coregraph_to_json(back.graph), a);
    EXPECT_NO_THROW(validate_instance(back));
  }
}

TEST(Model, MalformedJson) {
  EXPECT_THROW(coregraph_from_json(json::parse(R"({"components": [{"id": 3}]})")), Error);
  EXPECT_THROW(ppa_from_json(json::parse(R"({"components": {"CPU": {"28nm": "none"}}, "routers": {}})")), Error);
}

// Random mutations of a valid instance: validation must flag exactly the
// mutations that break an invariant.
TEST(Model, MutationProperty) {
  std::mt19937_64 gen(3);
  const Instance base = corpus::small_vsoc();
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Instance inst = base;
    bool should_fail = true;
    ErrorCode expect = ErrorCode::MalformedTable;
    auto& flows = inst.graph.flows;
    const std::size_t f = gen() % flows.size();
    switch (trial % 9) {
      case 0: flows[f].bandwidth = -std::abs(flows[f].bandwidth) * static_cast<double>(gen() % 2); expect = ErrorCode::NegativeBandwidth; break;
      case 1: flows[f].dst = "nobody" + std::to_string(gen() % 5); expect = ErrorCode::UnknownComponent; break;
      case 2: flows[f].dst = flows[f].src; break;
      case 3: inst.graph.components.push_back(inst.graph.components[gen() % inst.graph.components.size()]); break;
      case 4: inst.ppa.routers.erase("45nm"); break;
      case 5: inst.tech.link_capacity = 0.0; break;
      case 6: inst.ppa.components["CPU"]["28nm"]->area = -1.0; break;
      case 7: inst.layers = corpus::make_layers({"28nm", "28nm"}); expect = ErrorCode::NoFeasibleLayer; break;
      default:
        // benign edits
        flows[f].bandwidth *= 1.5;
        inst.tech.rd_max_length = static_cast<double>(gen() % 10);
        should_fail = false;
    }
    const auto v = check_instance(inst);
    EXPECT_EQ(!v.empty(), should_fail) << "trial " << trial;
    if (should_fail) {
      EXPECT_TRUE(has_code(v, expect)) << "trial " << trial;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(Model, SolutionJsonRoundTrip) {
  const Problem p = validate_instance(corpus::tiny_soc());
  Solution s;
  s.assignment.layer_of = {0, 0, 1, 1, 1};
  s.floorplans = {empty_floorplan(0, {1, 2}), empty_floorplan(1, {2, 2})};
  s.floorplans[0].cell_of = {0, 1};
  s.floorplans[0].col_widths = {6, 6};
  s.floorplans[0].row_heights = {6};
  s.floorplans[1].cell_of = {2, 3, 4, std::nullopt};
  s.floorplans[1].col_widths = {6, 6};
  s.floorplans[1].row_heights = {6, 6};
  s.vlinks = {{0, 1, 0, 6.0}};
  apply_router_kinds(s.floorplans, s.vlinks);
  s.floorplans[1].koz_charge[0] = 2.0;
  EXPECT_NO_THROW(check_solution(p, s));
  const Solution back = solution_from_json(p, json::parse(solution_to_json(p, s).dump()));
  EXPECT_EQ(back, s);
}

}  // namespace
}  // namespace noc3d
