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

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/rng.hpp"

namespace noc3d {

struct SaParams {
  double initial_temp = 20.0;
  std::size_t iterations = 120;
  double cooling = 0.97;
  std::uint64_t seed = 1;

  bool operator==(const SaParams&) const = default;
};

inline void validate(const SaParams& p) {
  if (!(std::isfinite(p.initial_temp) && p.initial_temp > 0.0))
    throw Error(ErrorCode::InvalidParams, "initial_temp must be > 0");
  if (!(p.cooling > 0.0 && p.cooling < 1.0)) throw Error(ErrorCode::InvalidParams, "cooling must be in (0,1)");
  if (p.iterations == 0) throw Error(ErrorCode::InvalidParams, "iterations must be > 0");
}

template <class State>
struct AnnealResult {
  State best_state;
  double best_cost = 0.0;
  // Cost of the current state: initial, then after each iteration.
  std::vector<double> cost_trace;
  std::size_t accepted = 0;
};

// Simulated annealing with Metropolis acceptance and geometric cooling, one
// proposal per iteration. `neighbor(const State&, Rng&) -> State`,
// `cost(const State&) -> double`. Deterministic in params.seed.
template <class State, class NeighborFn, class CostFn>
AnnealResult<State> anneal(State initial, NeighborFn&& neighbor, CostFn&& cost, const SaParams& params) {
  validate(params);
  Rng rng(params.seed);

  AnnealResult<State> result;
  double current_cost = cost(static_cast<const State&>(initial));
  State current = std::move(initial);
  result.best_state = current;
  result.best_cost = current_cost;
  result.cost_trace.reserve(params.iterations + 1);
  result.cost_trace.push_back(current_cost);

  double temp = params.initial_temp;
  for (std::size_t it = 0; it < params.iterations; ++it) {
    State candidate = neighbor(static_cast<const State&>(current), rng);
    const double candidate_cost = cost(static_cast<const State&>(candidate));
    const double delta = candidate_cost - current_cost;
    if (delta < 0.0 || uniform01(rng) < std::exp(-delta / temp)) {
      current = std::move(candidate);
      current_cost = candidate_cost;
      ++result.accepted;
      if (current_cost < result.best_cost) {
        result.best_cost = current_cost;
        result.best_state = current;
      }
    }
    result.cost_trace.push_back(current_cost);
    temp *= params.cooling;
  }
  return result;
}

}  // namespace noc3d
