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

#include "noc3d/simplex.hpp"
#include "support/oracles.hpp"

namespace noc3d {
namespace {

TEST(Simplex, TextbookProblem) {
  // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  const std::vector<double> a = {1, 0, 0, 2, 3, 2};
  const std::vector<double> b = {4, 12, 18};
  const std::vector<double> c = {3, 5};
  const LpResult r = maximize_lp(a, b, c);
  ASSERT_EQ(r.status, LpStatus::Optimal);
  EXPECT_NEAR(r.objective, 36.0, 1e-9);
  EXPECT_NEAR(r.x[0], 2.0, 1e-9);
  EXPECT_NEAR(r.x[1], 6.0, 1e-9);
  // duals solve min b'y s.t. A'y >= c: y = (0, 1.5, 1), objective 36
  EXPECT_NEAR(r.duals[0], 0.0, 1e-9);
  EXPECT_NEAR(r.duals[1], 1.5, 1e-9);
  EXPECT_NEAR(r.duals[2], 1.0, 1e-9);
}

TEST(Simplex, DetectsUnbounded) {
  const std::vector<double> a = {1, -1};
  const std::vector<double> b = {1};
  const std::vector<double> c = {1, 1};
  EXPECT_EQ(maximize_lp(a, b, c).status, LpStatus::Unbounded);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> coef(0.1, 5.0), rhs(0.0, 10.0), obj(-1.0, 4.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 2, m = 2 + trial % 5;
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    std::vector<double> flat, b(m), c(n);
    for (auto& row : rows)
      for (double& v : row) v = coef(gen);
    for (double& v : b) v = rhs(gen);
    for (double& v : c) v = obj(gen);
    for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
    const LpResult r = maximize_lp(flat, b, c);
    ASSERT_EQ(r.status, LpStatus::Optimal);
    const double expected = oracle::lp_by_vertices(rows, b, c);
    EXPECT_NEAR(r.objective, expected, 1e-7 * (1.0 + std::abs(expected))) << "trial " << trial;
    // strong duality
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < m; ++i) dual_obj += b[i] * r.duals[i];
    EXPECT_NEAR(dual_obj, r.objective, 1e-7 * (1.0 + std::abs(expected)));
  }
}

}  // namespace
}  // namespace noc3d
