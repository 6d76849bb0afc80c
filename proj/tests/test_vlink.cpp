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

#include "noc3d/vlink_sa.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

namespace noc3d {
namespace {

using testing::make_floorplan;

VlinkParams sa(std::uint64_t seed) {
  VlinkParams v;
  v.sa.seed = seed;
  return v;
}

// Best step-4 cost over every disjoint subset of `count` candidates.
double exhaustive_best(const Problem& p, const std::vector<LayerFloorplan>& fps, const std::vector<VerticalLink>& cands,
                       std::size_t count, const ObjectiveWeights& w) {
  double best = std::numeric_limits<double>::infinity();
  oracle::for_each_subset(cands.size(), count, [&](const std::vector<std::size_t>& pick) {
    if (!is_matching(cands, pick)) return;
    std::vector<VerticalLink> links;
    for (std::size_t k : pick) links.push_back(cands[k]);
    best = std::min(best, step4_cost(p, fps, links, {}, w));
  });
  return best;
}

TEST(Vlink, CandidatesWithinReach) {
  std::vector<LayerFloorplan> fps = {make_floorplan(0, {1, 3}, {0, 1, 2}, {6, 6, 6}, {6}),
                                     make_floorplan(1, {1, 1}, {3}, {6}, {6})};
  const auto c = candidate_links(fps, 0, 6.0);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].lower_cell, 1u);
  EXPECT_DOUBLE_EQ(c[0].rd_length, 0.0);
  EXPECT_DOUBLE_EQ(c[1].rd_length, 6.0);
  EXPECT_EQ(candidate_links(fps, 0, 5.9).size(), 1u);
  EXPECT_EQ(max_matching(c), 1u);
  EXPECT_DOUBLE_EQ(minimum_reach(fps, 0, 1), 0.0);
}

TEST(Vlink, ForcedSelection) {
  const std::vector<Flow> flows = {{"c0", "c2", 5.0}, {"c3", "c1", 5.0}};
  const Problem p = validate_instance(testing::cpu_instance(4, 2, flows));
  std::vector<LayerFloorplan> fps = {make_floorplan(0, {1, 2}, {0, 1}, {6, 6}, {6}),
                                     make_floorplan(1, {1, 2}, {2, 3}, {6, 6}, {6})};
  const auto cands = candidate_links(fps, 0, 0.0);
  ASSERT_EQ(cands.size(), 2u);
  const Problem p0 = with_rd_max(p, 0.0);
  const std::vector<std::size_t> counts = {2};
  const auto r = place_vlinks(p0, fps, counts, {}, sa(3));
  EXPECT_EQ(r.vlinks, cands);
  for (double c : r.cost_trace) EXPECT_DOUBLE_EQ(c, r.best_cost);
}

TEST(Vlink, PicksNearerCandidate) {
  // src below the left end of a 1x3 upper row, dst on the left
  const std::vector<Flow> flows = {{"c0", "c1", 10.0}};
  Instance inst = testing::cpu_instance(4, 2, flows);
  inst.tech.rd_max_length = 12.0;
  const Problem p = validate_instance(inst);
  auto lower = make_floorplan(0, {1, 1}, {0}, {6}, {6});
  lower.origin = Point{0, 0};
  auto upper = make_floorplan(1, {1, 3}, {1, 2, 3}, {6, 6, 6}, {6});
  upper.origin = Point{0, 0};
  std::vector<LayerFloorplan> fps = {lower, upper};
  const auto cands = candidate_links(fps, 0, 12.0);
  ASSERT_EQ(cands.size(), 3u);
  const std::vector<std::size_t> counts = {1};
  const ObjectiveWeights w{};
  std::size_t best_k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const std::vector<VerticalLink> one = {cands[k]};
    const double c = step4_cost(p, fps, one, {}, w);
    if (c < best) {
      best = c;
      best_k = k;
    }
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = place_vlinks(p, fps, counts, w, sa(seed));
    ASSERT_EQ(r.vlinks.size(), 1u);
    EXPECT_EQ(r.vlinks[0], cands[best_k]);
    EXPECT_EQ(r.vlinks[0].upper_cell, 0u);
    EXPECT_DOUBLE_EQ(r.best_cost, best);
  }
}

TEST(Vlink, InsufficientAndMissingCandidates) {
  const std::vector<Flow> flows = {{"c0", "c2", 5.0}};
  Instance inst = testing::cpu_instance(3, 2, flows);
  inst.tech.rd_max_length = 0.5;
  const Problem p = validate_instance(inst);
  std::vector<LayerFloorplan> fps = {make_floorplan(0, {1, 2}, {0, 1}, {6, 6}, {6}),
                                     make_floorplan(1, {1, 1}, {2}, {6}, {6})};
  const std::vector<std::size_t> two = {2}, one = {1};
  try {
    place_vlinks(p, fps, one, {}, sa(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCandidates);
    EXPECT_NE(std::string(e.what()).find("R >= 3"), std::string::npos);
  }
  const Problem wide = with_rd_max(p, 10.0);
  try {
    place_vlinks(wide, fps, two, {}, sa(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCandidates);
  }
}

struct Case {
  Problem p;
  std::vector<LayerFloorplan> fps;
};

Case random_case(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> size(4.0, 8.0), u(0.0, 1.0), bw(1.0, 40.0);
  std::vector<Flow> flows;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j && u(gen) < 0.15) flows.push_back({"c" + std::to_string(i), "c" + std::to_string(j), bw(gen)});
  Instance inst = testing::cpu_instance(8, 2, flows);
  inst.tech.rd_max_length = 50.0;
  Case c{validate_instance(inst), {}};
  for (std::size_t l = 0; l < 2; ++l) {
    std::vector<int> comps;
    for (int k = 0; k < 4; ++k) comps.push_back(static_cast<int>(l * 4) + k);
    c.fps.push_back(make_floorplan(l, {2, 2}, comps, {size(gen), size(gen)}, {size(gen), size(gen)}));
  }
  return c;
}

class VlinkProperty : public ::testing::TestWithParam<int> {};

TEST_P(VlinkProperty, ReachCardinalityAndNestedOptimum) {
  std::mt19937_64 gen(static_cast<std::uint64_t>(GetParam()) * 31337);
  std::uniform_real_distribution<double> reach(0.0, 12.0);
  std::uniform_int_distribution<std::size_t> cnt(1, 3);
  const ObjectiveWeights w{};
  for (int trial = 0; trial < 8; ++trial) {
    const Case c = random_case(gen);
    double r1 = reach(gen), r2 = reach(gen);
    if (r1 > r2) std::swap(r1, r2);
    const std::size_t count = cnt(gen);
    const auto c1 = candidate_links(c.fps, 0, r1), c2 = candidate_links(c.fps, 0, r2);
    EXPECT_LE(c1.size(), c2.size());
    if (max_matching(c1) < count) continue;
    const double o1 = exhaustive_best(c.p, c.fps, c1, count, w);
    const double o2 = exhaustive_best(c.p, c.fps, c2, count, w);
    EXPECT_LE(o2, o1 * (1 + 1e-12));
    const Problem pr = with_rd_max(c.p, r2);
    const std::vector<std::size_t> counts = {count};
    const auto res = place_vlinks(pr, c.fps, counts, w, sa(gen()));
    EXPECT_EQ(res.vlinks.size(), count);
    for (const auto& v : res.vlinks) EXPECT_LE(v.rd_length, r2 + kReachSlack);
    std::vector<std::size_t> idx;
    for (const auto& v : res.vlinks)
      idx.push_back(static_cast<std::size_t>(std::find(c2.begin(), c2.end(), v) - c2.begin()));
    EXPECT_TRUE(is_matching(c2, idx));
    EXPECT_GE(res.best_cost, o2 * (1 - 1e-12));
    EXPECT_LE(res.best_cost, res.cost_trace.front());
    EXPECT_DOUBLE_EQ(res.best_cost, step4_cost(pr, c.fps, res.vlinks, {}, w));
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, VlinkProperty, ::testing::Range(1, 16));

TEST(VlinkMatching, MaxMatchingAgainstSubsets) {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 100; ++trial) {
    const Case c = random_case(gen);
    const auto cands = candidate_links(c.fps, 0, std::uniform_real_distribution<double>(0.0, 14.0)(gen));
    const std::size_t m = max_matching(cands);
    // brute-force largest disjoint subset
    std::size_t best = 0;
    for (std::size_t k = 1; k <= std::min<std::size_t>(4, cands.size()); ++k)
      oracle::for_each_subset(cands.size(), k, [&](const std::vector<std::size_t>& pick) {
        if (is_matching(cands, pick)) best = std::max(best, k);
      });
    EXPECT_EQ(m, best);
  }
}

}  // namespace
}  // namespace noc3d
