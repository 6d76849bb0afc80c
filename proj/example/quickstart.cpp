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


// Runs the five-step synthesis on a built-in instance (or an instance
// directory given on the command line) and prints the headline metrics.

#include <iostream>

#include "noc3d/corpus.hpp"
#include "noc3d/noc3d.hpp"

int main(int argc, char** argv) try {
  const noc3d::Instance inst = argc > 1 ? noc3d::load_instance(argv[1]) : noc3d::corpus::small_vsoc();
  const noc3d::Problem problem = noc3d::validate_instance(inst);

  noc3d::PipelineConfig config;
  config.seed = 7;
  const noc3d::PipelineResult result = noc3d::run_pipeline(problem, config);
  const noc3d::Evaluation& ev = *result.evaluation;

  std::cout << "total cost        " << ev.total << "\n"
            << "area term         " << ev.terms.area << " mm^2\n"
            << "whitespace        " << ev.total_whitespace << " mm^2\n"
            << "bw x distance     " << ev.terms.util << " Mb/s*mm\n"
            << "vertical links    " << result.solution.vlinks.size() << "\n";
  for (std::size_t l = 0; l < result.solution.floorplans.size(); ++l) {
    const auto& fp = result.solution.floorplans[l];
    std::cout << "layer " << l << "           " << fp.dims.rows << "x" << fp.dims.cols << ", " << fp.width() << " x "
              << fp.height() << " mm\n";
  }
  for (const auto& w : result.warnings) std::cout << "warning: " << w << "\n";
  return 0;
} catch (const noc3d::Error& e) {
  std::cerr << e.what() << "\n";
  return noc3d::exit_code(e.code());
}
