// Copyright 2026 The splitbranch Authors
//
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

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "splitbranch/io.hpp"

namespace support {

using namespace splitbranch;

Milp random_lp(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Milp p;
  p.name = "lp" + std::to_string(seed);
  const int n = uni(2, 6);
  const int m = uni(1, 5);
  for (int j = 0; j < n; ++j) {
    const double lo = uni(-3, 1);
    const double hi = lo + uni(0, 6) + (uni(0, 1) ? 0.5 : 0.0);
    p.add_variable("x" + std::to_string(j), uni(-6, 6), lo, hi == lo ? lo + 1.0 : hi, false);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> a(n);
    for (double& v : a) v = uni(0, 3) == 0 ? 0.0 : uni(-5, 5);
    const int s = uni(0, 4);
    const RowSense sense = s < 2 ? RowSense::kLessEqual : s < 4 ? RowSense::kGreaterEqual
                                                              : RowSense::kEqual;
    p.add_row("r" + std::to_string(i), std::move(a), sense, uni(-8, 8) + 0.25 * uni(0, 3));
  }
  return p;
}

double equality_residual(const StandardForm& sf, const LpResult& res) {
  const auto y = res.standard();
  double worst = 0.0;
  for (int r = 0; r < sf.num_rows; ++r) {
    double act = 0.0;
    for (int c = 0; c < sf.num_cols(); ++c) act += sf.at(r, c) * y[c];
    worst = std::max(worst, std::abs(act - sf.rhs[r]));
  }
  return worst;
}

Milp oracle_tier_instance(int index) {
  GeneratorParams gp;
  const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(index);
  gp.max_range = 5;
  gp.max_grid = 3000;
  gp.num_rows = 2 + index % 4;
  switch (index % 3) {
    case 0:
      gp.num_vars = 4 + index % 5;
      return generate_instance(Family::kKnapsack, gp, seed);
    case 1:
      gp.num_vars = 5 + index % 4;
      gp.num_rows = 3 + index % 3;
      return generate_instance(Family::kSetCover, gp, seed);
    default:
      // 8 integer variables at most, plus the continuous share.
      gp.num_vars = 5 + index % 5;
      gp.continuous_fraction = 0.2;
      return generate_instance(Family::kMixed, gp, seed);
  }
}

Milp timing_tier_instance(int index) {
  GeneratorParams gp;
  gp.num_vars = 14 + index % 7;
  gp.num_rows = 2 + index % 2;
  gp.max_range = 4;
  return generate_instance(Family::kKnapsack, gp, 5000 + static_cast<std::uint64_t>(index));
}

}  // namespace support
