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

#include "noc3d/floorplan_sa.hpp"
#include "noc3d/layer_assign.hpp"
#include "noc3d/tsv_count.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

namespace noc3d {
namespace {

// Exact expectation of sum_j b_j d_j over every site subset of size i.
double subset_expected_bd(const std::vector<CrossTerminal>& terms, const std::vector<Point>& sites, std::size_t i) {
  double total = 0.0;
  std::size_t subsets = 0;
  oracle::for_each_subset(sites.size(), i, [&](const std::vector<std::size_t>& pick) {
    for (const auto& t : terms) {
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t s : pick) d = std::min(d, std::abs(t.position.x - sites[s].x) + std::abs(t.position.y - sites[s].y));
      total += t.bandwidth * d;
    }
    ++subsets;
  });
  return total / static_cast<double>(subsets);
}

TEST(TsvCount, SingleArrayFormula) {
  const std::vector<CrossTerminal> terms = {{0, {0, 0}, 10.0}, {1, {4, 2}, 10.0}};
  const std::vector<Point> sites = {{1, 2}};
  const auto est = estimate_arrays(terms, sites, 1, 8, 1, 2.0, {});
  EXPECT_DOUBLE_EQ(est.c3, 2.0 + 10.0 * 3.0 + 10.0 * 3.0);
  EXPECT_DOUBLE_EQ(est.bandwidth[0], 20.0);
  EXPECT_DOUBLE_EQ(est.distance[0], 3.0);
}

TEST(TsvCount, WeightsScaleTerms) {
  const std::vector<CrossTerminal> terms = {{0, {0, 0}, 10.0}};
  const std::vector<Point> sites = {{1, 2}};
  EXPECT_DOUBLE_EQ(estimate_arrays(terms, sites, 1, 1, 1, 2.0, {3, 1, 1, 1, 0.5}).c3, 3 * 2.0 + 0.5 * 30.0);
}

TEST(TsvCount, TooManyArrays) {
  const std::vector<CrossTerminal> terms = {{0, {0, 0}, 1.0}};
  const std::vector<Point> sites = {{0, 0}};
  try {
    estimate_arrays(terms, sites, 2, 4, 1, 2.0, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyArrays);
  }
}

TEST(TsvCount, NoCrossTrafficGivesZero) {
  const std::vector<Flow> flows = {{"c0", "c1", 5.0}};
  const Problem p = validate_instance(testing::cpu_instance(3, 2, flows));
  LayerAssignment a;
  a.layer_of = {0, 0, 1};
  std::vector<LayerFloorplan> fps;
  for (const auto& r : floorplan_all(p, a, {}, {})) fps.push_back(r.floorplan);
  const auto plan = choose_count(p, fps, 0, {}, {});
  EXPECT_EQ(plan.count, 0u);
  EXPECT_EQ(plan.c3, 0.0);
}

TEST(TsvCount, SymmetricTwoByTwoAgainstSubsetOracle) {
  // four lower components each talk to the upper component above them
  std::vector<Flow> flows;
  for (int i = 0; i < 4; ++i) flows.push_back({"c" + std::to_string(i), "c" + std::to_string(4 + i), 10.0});
  const Problem p = validate_instance(testing::cpu_instance(8, 2, flows));
  std::vector<LayerFloorplan> fps = {testing::make_floorplan(0, {2, 2}, {0, 1, 2, 3}, {6, 6}, {6, 6}),
                                     testing::make_floorplan(1, {2, 2}, {4, 5, 6, 7}, {6, 6}, {6, 6})};
  const auto terms = cross_terminals(p, fps, 0);
  const auto sites = array_sites(fps, 0);
  ASSERT_EQ(terms.size(), 8u);
  TsvParams tp;
  tp.samples = 256;
  const auto plan = choose_count(p, fps, 0, {}, tp);
  ASSERT_EQ(plan.curve.size(), 4u);
  std::size_t oracle_best = 0;
  double oracle_c3 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= 4; ++i) {
    const double c3 = 2.0 * static_cast<double>(i) + subset_expected_bd(terms, sites, i);
    EXPECT_NEAR(plan.curve[i - 1].c3, c3, 0.10 * c3) << "i = " << i;
    if (c3 < oracle_c3) {
      oracle_c3 = c3;
      oracle_best = i;
    }
  }
  EXPECT_EQ(plan.count, oracle_best);
  // self-consistency: argmin of the reported curve
  std::size_t self = 1;
  for (std::size_t i = 2; i <= 4; ++i)
    if (plan.curve[i - 1].c3 < plan.curve[self - 1].c3) self = i;
  EXPECT_EQ(plan.count, self);
}

class TsvProperty : public ::testing::TestWithParam<int> {};

TEST_P(TsvProperty, ConservationBoundsDeterminism) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) * 104729);
  std::uniform_real_distribution<double> coord(-20.0, 20.0), bw(0.5, 50.0);
  std::uniform_int_distribution<std::size_t> nterm(1, 10), nsite(1, 7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CrossTerminal> terms(nterm(gen));
    double total = 0.0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      terms[k] = {k, {coord(gen), coord(gen)}, bw(gen)};
      total += terms[k].bandwidth;
    }
    std::vector<Point> sites(nsite(gen));
    for (auto& s : sites) s = {coord(gen), coord(gen)};
    const std::uint64_t seed = gen();
    double prev_exact = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= sites.size(); ++i) {
      const auto est = estimate_arrays(terms, sites, i, 16, seed, 2.0, {});
      double sum_b = 0.0;
      for (double b : est.bandwidth) sum_b += b;
      EXPECT_NEAR(sum_b, total, 1e-9 * total);
      EXPECT_GE(est.c3, static_cast<double>(i) * 2.0);
      for (std::size_t j = 0; j + 1 < i; ++j) EXPECT_GE(est.bandwidth[j], 0.0);
      for (double d : est.distance) EXPECT_GE(d, 0.0);
      const auto again = estimate_arrays(terms, sites, i, 16, seed, 2.0, {});
      EXPECT_EQ(est.c3, again.c3);
      EXPECT_EQ(est.bandwidth, again.bandwidth);
      // the exact expectation never grows with more arrays
      const double exact = subset_expected_bd(terms, sites, i);
      EXPECT_LE(exact, prev_exact + 1e-9 * std::max(1.0, exact));
      prev_exact = exact;
      if (i == sites.size()) {
        EXPECT_NEAR(est.expected_bd, exact, 1e-9 * std::max(1.0, exact));
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TsvProperty, ::testing::Range(1, 11));

TEST(TsvCount, CrossTerminalsCountBothEndpoints) {
  const std::vector<Flow> flows = {{"c0", "c1", 7.0}, {"c1", "c0", 3.0}, {"c0", "c2", 1.0}};
  const Problem p = validate_instance(testing::cpu_instance(3, 2, flows));
  std::vector<LayerFloorplan> fps = {testing::make_floorplan(0, {1, 2}, {0, 2}, {6, 6}, {6}),
                                     testing::make_floorplan(1, {1, 1}, {1}, {6}, {6})};
  const auto terms = cross_terminals(p, fps, 0);
  ASSERT_EQ(terms.size(), 2u);
  EXPECT_DOUBLE_EQ(terms[0].bandwidth, 10.0);
  EXPECT_DOUBLE_EQ(terms[1].bandwidth, 10.0);
}

}  // namespace
}  // namespace noc3d
