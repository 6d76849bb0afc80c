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

// Benchmark instances and traffic generators. The VSoC flow tables are
// synthesized from the application structure (capture -> convert -> filter /
// detect -> track); they are not measured values.

#pragma once

#include <string>
#include <vector>

#include "noc3d/model.hpp"
#include "noc3d/rng.hpp"

namespace noc3d::corpus {

// 28nm digital / 45nm mixed-signal case-study table.
inline PpaTable vsoc_ppa() {
  PpaTable t;
  t.components["CPU"]["28nm"] = PpaEntry{35.8, 1.0, 1.0};
  t.components["CPU"]["45nm"] = PpaEntry{62.2, 1.34, 1.34};
  t.components["ADC"]["28nm"] = std::nullopt;
  t.components["ADC"]["45nm"] = PpaEntry{53.0, 1.0, 1.0};
  t.components["SIMD"]["28nm"] = PpaEntry{71.0, 1.0, 1.0};
  t.components["SIMD"]["45nm"] = PpaEntry{125.0, 1.34, 1.34};
  t.routers["28nm"] = RouterPpa{1.3, 1.8, 1.0, 1.0};
  t.routers["45nm"] = RouterPpa{2.25, 3.15, 1.34, 1.34};
  return t;
}

inline TechParams vsoc_tech(double link_capacity) { return TechParams{2.0, 5.0, link_capacity}; }

inline std::vector<Layer> make_layers(std::initializer_list<const char*> nodes) {
  std::vector<Layer> out;
  for (const char* n : nodes) out.push_back({out.size(), n});
  return out;
}

inline std::string indexed(const std::string& prefix, std::size_t i) { return prefix + std::to_string(i); }

inline void add_flow(CoreGraph& g, const std::string& a, const std::string& b, double bw, bool both_ways = false) {
  g.flows.push_back({a, b, bw});
  if (both_ways) g.flows.push_back({b, a, bw});
}

// Flows between consecutive components, in both directions when requested.
inline std::vector<Flow> chain_traffic(const std::vector<Component>& comps, double bandwidth, bool bidirectional = true) {
  CoreGraph g;
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) add_flow(g, comps[i].id, comps[i + 1].id, bandwidth, bidirectional);
  return g.flows;
}

// Uniform traffic carrying `total_bandwidth` in sum. With flows_per_component
// == 0 every ordered pair gets an equal share (the expectation of uniform
// random destinations); otherwise each source picks that many distinct
// destinations uniformly at random.
inline std::vector<Flow> uniform_random_traffic(const std::vector<Component>& comps, double total_bandwidth,
                                                std::uint64_t seed = 1, std::size_t flows_per_component = 0) {
  std::vector<Flow> out;
  const std::size_t n = comps.size();
  if (n < 2) return out;
  if (flows_per_component == 0 || flows_per_component >= n - 1) {
    const double bw = total_bandwidth / static_cast<double>(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) out.push_back({comps[i].id, comps[j].id, bw});
    return out;
  }
  Rng rng(seed);
  const double bw = total_bandwidth / static_cast<double>(n * flows_per_component);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    for (std::size_t k = 0; k < flows_per_component; ++k) {
      const std::size_t pick = k + uniform_index(rng, others.size() - k);
      std::swap(others[k], others[pick]);
      out.push_back({comps[i].id, comps[others[k]].id, bw});
    }
  }
  return out;
}

inline double total_bandwidth(const CoreGraph& g) {
  double s = 0.0;
  for (const auto& f : g.flows) s += f.bandwidth;
  return s;
}

// Five CPUs on two 28nm layers with 1 Mb/s bidirectional chain traffic.
inline Instance tiny_soc() {
  Instance inst;
  for (std::size_t i = 0; i < 5; ++i) inst.graph.components.push_back({indexed("cpu", i), "CPU"});
  inst.graph.flows = chain_traffic(inst.graph.components, 1.0);
  inst.ppa = vsoc_ppa();
  inst.tech = vsoc_tech(10.0);
  inst.layers = make_layers({"28nm", "28nm"});
  return inst;
}

// 9 ADCs on the mixed-signal (top) layer feed 9 CPUs running a tiled
// convolution; tiles exchange halos with their 4-neighbours in a 3x3 tiling
// and report to the centre tile.
inline Instance small_vsoc() {
  Instance inst;
  auto& g = inst.graph;
  for (std::size_t i = 0; i < 9; ++i) g.components.push_back({indexed("adc", i), "ADC"});
  for (std::size_t i = 0; i < 9; ++i) g.components.push_back({indexed("cpu", i), "CPU"});
  for (std::size_t i = 0; i < 9; ++i) add_flow(g, indexed("adc", i), indexed("cpu", i), 50.0);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t i = r * 3 + c;
      if (c + 1 < 3) add_flow(g, indexed("cpu", i), indexed("cpu", i + 1), 4.0, true);
      if (r + 1 < 3) add_flow(g, indexed("cpu", i), indexed("cpu", i + 3), 4.0, true);
      if (i != 4) add_flow(g, indexed("cpu", i), "cpu4", 2.0);
    }
  inst.ppa = vsoc_ppa();
  inst.tech = vsoc_tech(100.0);
  inst.layers = make_layers({"28nm", "45nm"});
  return inst;
}

// 9 ADCs, 18 CPUs, 3 SIMD cores on two 28nm layers under one 45nm layer
// (sensor on top). CPUs 0-8 pre-process one ADC stream each, the SIMD cores run
// the detection cascade on three tiles each, CPUs 9-17 run feature
// extraction and tracking.
inline Instance large_vsoc() {
  Instance inst;
  auto& g = inst.graph;
  for (std::size_t i = 0; i < 9; ++i) g.components.push_back({indexed("adc", i), "ADC"});
  for (std::size_t i = 0; i < 18; ++i) g.components.push_back({indexed("cpu", i), "CPU"});
  for (std::size_t i = 0; i < 3; ++i) g.components.push_back({indexed("simd", i), "SIMD"});
  for (std::size_t i = 0; i < 9; ++i) {
    add_flow(g, indexed("adc", i), indexed("cpu", i), 50.0);
    add_flow(g, indexed("cpu", i), indexed("simd", i / 3), 16.0);
  }
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j) add_flow(g, indexed("simd", k), indexed("cpu", 9 + 3 * k + j), 8.0);
  for (std::size_t i = 9; i + 1 < 18; ++i) add_flow(g, indexed("cpu", i), indexed("cpu", i + 1), 3.0, true);
  for (std::size_t i = 9; i < 17; ++i) add_flow(g, indexed("cpu", i), "cpu17", 1.0);
  inst.ppa = vsoc_ppa();
  inst.tech = vsoc_tech(100.0);
  inst.layers = make_layers({"28nm", "28nm", "45nm"});
  return inst;
}

// Video object plane decoder style pipeline (12 cores, two 28nm layers).
inline Instance vopd() {
  Instance inst;
  auto& g = inst.graph;
  const char* names[] = {"vld", "run_le_dec", "inv_scan", "acdc_pred", "stripe_mem", "iquan",
                         "idct", "up_samp", "vop_rec", "pad", "vop_mem", "arm"};
  for (const char* n : names) g.components.push_back({n, "CPU"});
  add_flow(g, "vld", "run_le_dec", 70.0);
  add_flow(g, "run_le_dec", "inv_scan", 362.0);
  add_flow(g, "inv_scan", "acdc_pred", 362.0);
  add_flow(g, "acdc_pred", "iquan", 362.0);
  add_flow(g, "acdc_pred", "stripe_mem", 49.0);
  add_flow(g, "stripe_mem", "acdc_pred", 27.0);
  add_flow(g, "iquan", "idct", 357.0);
  add_flow(g, "idct", "up_samp", 353.0);
  add_flow(g, "up_samp", "vop_rec", 300.0);
  add_flow(g, "vop_rec", "pad", 313.0);
  add_flow(g, "pad", "vop_mem", 313.0);
  add_flow(g, "vop_mem", "pad", 94.0);
  add_flow(g, "vop_mem", "up_samp", 500.0);
  add_flow(g, "arm", "idct", 16.0);
  add_flow(g, "arm", "pad", 16.0);
  inst.ppa = vsoc_ppa();
  inst.tech = vsoc_tech(1000.0);
  inst.layers = make_layers({"28nm", "28nm"});
  return inst;
}

}  // namespace noc3d::corpus
