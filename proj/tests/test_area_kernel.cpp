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

#include "noc3d/area_kernel.hpp"
#include "support/oracles.hpp"

namespace noc3d {
namespace {

CellDemand grid(std::size_t rows, std::size_t cols, std::vector<double> d) { return {{rows, cols}, std::move(d)}; }

void expect_feasible(const CellDemand& d, const AreaSolution& s) {
  for (std::size_t r = 0; r < d.dims.rows; ++r)
    for (std::size_t c = 0; c < d.dims.cols; ++c)
      if (d.at(r, c) > 0.0) {
        EXPECT_GE(s.col_widths[c] * s.row_heights[r], d.at(r, c) - 1e-9);
      }
}

std::vector<std::vector<double>> as_rows(const CellDemand& d) {
  std::vector<std::vector<double>> out(d.dims.rows, std::vector<double>(d.dims.cols));
  for (std::size_t r = 0; r < d.dims.rows; ++r)
    for (std::size_t c = 0; c < d.dims.cols; ++c) out[r][c] = d.at(r, c);
  return out;
}

CellDemand random_demand(std::mt19937_64& gen, std::size_t max_side = 4, double empty_p = 0.25) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  std::uniform_real_distribution<double> area(0.5, 120.0), u(0.0, 1.0);
  CellDemand d{{side(gen), side(gen)}, {}};
  for (std::size_t i = 0; i < d.dims.cells(); ++i) d.demand.push_back(u(gen) < empty_p ? 0.0 : area(gen));
  return d;
}

TEST(AreaKernel, SingleCell) {
  const auto d = grid(1, 1, {35.8});
  const auto lp = min_area_lp(d);
  EXPECT_LE(lp.area, 35.8 + 1e-9);
  EXPECT_GE(lp.area, 0.96 * 35.8);
  EXPECT_NEAR(repair_feasibility(d, lp).area, 35.8, 1e-9);
  const auto s = solve_area(d);
  EXPECT_NEAR(s.area, 35.8, 1e-9);
  EXPECT_NEAR(s.col_widths[0], std::sqrt(35.8), 1e-6);
  EXPECT_NEAR(s.row_heights[0], std::sqrt(35.8), 1e-6);
}

TEST(AreaKernel, EmptyGrid) {
  const auto d = grid(2, 3, std::vector<double>(6, 0.0));
  const auto s = solve_area(d);
  EXPECT_EQ(s.area, 0.0);
  for (double w : s.col_widths) EXPECT_EQ(w, 0.0);
  for (double h : s.row_heights) EXPECT_EQ(h, 0.0);
}

TEST(AreaKernel, OneByTwo) {
  const auto s = solve_area(grid(1, 2, {4.0, 9.0}));
  EXPECT_NEAR(s.area, 13.0, 1e-7);
  EXPECT_NEAR(s.col_widths[0] * s.row_heights[0], 4.0, 1e-7);
  EXPECT_NEAR(s.col_widths[1] * s.row_heights[0], 9.0, 1e-7);
}

TEST(AreaKernel, TwoByTwoUniform) {
  const auto s = solve_area(grid(2, 2, {4, 4, 4, 4}));
  EXPECT_NEAR(s.area, 16.0, 1e-7);
  for (double w : s.col_widths) EXPECT_NEAR(w, 2.0, 1e-6);
  for (double h : s.row_heights) EXPECT_NEAR(h, 2.0, 1e-6);
}

TEST(AreaKernel, RejectsBadInput) {
  EXPECT_THROW(min_area_lp(grid(1, 2, {1.0})), Error);
  EXPECT_THROW(min_area_lp(grid(1, 1, {-1.0})), Error);
  EXPECT_THROW(min_area_lp(grid(1, 1, {1.0}), 1), Error);
}

TEST(AreaKernel, TangentPointsSpanRange) {
  const auto t = tangent_points(16.0, 8);
  ASSERT_EQ(t.size(), 8u);
  EXPECT_NEAR(t.front(), 1.0, 1e-12);
  EXPECT_NEAR(t.back(), 16.0, 1e-12);
  for (std::size_t i = 1; i < t.size(); ++i) EXPECT_NEAR(t[i] / t[i - 1], t[1] / t[0], 1e-12);
}

TEST(AreaKernel, ExactMatchesSearchOracle) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 60; ++trial) {
    CellDemand d = random_demand(gen, 4);
    d.dims.rows = std::min<std::size_t>(d.dims.rows, 3);
    d.demand.resize(d.dims.cells());
    const auto s = solve_area(d);
    const double expected = oracle::min_area_by_search(as_rows(d));
    EXPECT_NEAR(s.area, expected, 1e-6 * (1.0 + expected)) << "trial " << trial;
    expect_feasible(d, s);
  }
}

TEST(AreaKernel, Properties) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const CellDemand d = random_demand(gen);
    const auto lp = min_area_lp(d);
    const auto repaired = repair_feasibility(d, lp);
    const auto exact = min_area_exact(d, lp.col_widths, lp.row_heights);
    double sum = 0.0;
    for (double a : d.demand) sum += a;
    expect_feasible(d, repaired);
    expect_feasible(d, exact);
    EXPECT_LE(exact.area, repaired.area * (1.0 + 1e-9));
    EXPECT_GE(exact.area, sum * (1.0 - 1e-9));
    EXPECT_LE(lp.area, exact.area * (1.0 + 1e-9)) << "relaxation above the optimum";

    CellDemand bigger = d;
    const std::size_t k = static_cast<std::size_t>(gen() % bigger.demand.size());
    bigger.demand[k] += 10.0;
    EXPECT_GE(solve_area(bigger).area, exact.area * (1.0 - 1e-7));
  }
}

TEST(AreaKernel, ExactIsInsensitiveToStart) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    const CellDemand d = random_demand(gen);
    std::vector<double> w(d.dims.cols, 1.0), h(d.dims.rows, 1.0);
    const auto from_ones = min_area_exact(d, w, h);
    const auto from_lp = solve_area(d);
    EXPECT_NEAR(from_ones.area, from_lp.area, 1e-6 * (1.0 + from_lp.area));
  }
}

TEST(AreaKernel, GaugeIsSquare) {
  const auto s = solve_area(grid(2, 3, {5, 9, 1, 3, 0, 7}));
  double sw = 0.0, sh = 0.0;
  for (double w : s.col_widths) sw += w;
  for (double h : s.row_heights) sh += h;
  EXPECT_NEAR(sw, sh, 1e-9 * sw);
}

}  // namespace
}  // namespace noc3d
