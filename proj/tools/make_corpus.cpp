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


// Writes the benchmark corpus: one directory per instance with
// coregraph.json, ppa.json, tech.json, plus the conventional-design configs
// for the two vision SoCs.

#include <filesystem>
#include <iostream>

#include "noc3d/noc3d.hpp"

namespace fs = std::filesystem;
using namespace noc3d;

namespace {

void write_conventional(const fs::path& dir, const Instance& inst, const std::vector<std::string>& mesh,
                        const std::function<std::size_t(const Component&, std::size_t)>& layer_of) {
  json assignment = json::object();
  std::map<std::string, std::size_t> seen;
  for (const auto& c : inst.graph.components) assignment[c.id] = layer_of(c, seen[c.kind]++);
  write_json_file(dir / "conventional.json",
                  {{"fixed_assignment", assignment}, {"fixed_mesh", mesh}, {"no_rd", true}});
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("data");
  save_instance(root / "tiny_soc", corpus::tiny_soc());
  save_instance(root / "vopd", corpus::vopd());

  const Instance small = corpus::small_vsoc();
  save_instance(root / "small_vsoc", small);
  // CPUs on the digital layer, ADCs on the mixed-signal layer, 3x3 each
  write_conventional(root / "small_vsoc", small, {"3x3", "3x3"},
                     [](const Component& c, std::size_t) -> std::size_t { return c.kind == "ADC" ? 1 : 0; });

  const Instance large = corpus::large_vsoc();
  save_instance(root / "large_vsoc", large);
  // 12 CPUs in a 4x3 mesh, 6 CPUs + 3 SIMD in a 3x3 mesh, ADCs 3x3 on top
  write_conventional(root / "large_vsoc", large, {"4x3", "3x3", "3x3"},
                     [](const Component& c, std::size_t k) -> std::size_t {
                       if (c.kind == "ADC") return 2;
                       if (c.kind == "SIMD") return 1;
                       return k < 12 ? 0 : 1;
                     });

  // Uniform-traffic variant of the large SoC with the same total bandwidth.
  Instance uniform = large;
  uniform.graph.flows = corpus::uniform_random_traffic(large.graph.components, corpus::total_bandwidth(large.graph));
  save_instance(root / "large_vsoc_uniform", uniform);

  write_json_file(root / "default_config.json", config_to_json(PipelineConfig{}));
  std::cout << "corpus written to " << root.string() << "\n";
  return 0;
}
