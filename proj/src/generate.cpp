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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "splitbranch/error.hpp"
#include "splitbranch/io.hpp"

namespace splitbranch {
namespace {

std::string label(char prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%04d", prefix, i + 1);
  return buf;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Random integer ranges in [1, max_range], shrunk until the grid fits.
std::vector<int> integer_ranges(std::mt19937_64& rng, int count, const GeneratorParams& params) {
  std::vector<int> range(count);
  for (int& r : range) r = uniform_int(rng, 1, params.max_range);
  if (params.max_grid > 0.0) {
    auto grid = [&] {
      double g = 1.0;
      for (int r : range) g *= r + 1.0;
      return g;
    };
    while (grid() > params.max_grid) {
      const auto it = std::max_element(range.begin(), range.end());
      if (*it <= 1) break;
      --*it;
    }
  }
  return range;
}

// Rounds to a multiple of 1/8 so coefficients stay exactly representable.
double eighths(double v) { return std::round(v * 8.0) / 8.0; }

Milp knapsack(const GeneratorParams& params, std::mt19937_64& rng) {
  Milp p;
  const int n = params.num_vars;
  const std::vector<int> range = integer_ranges(rng, n, params);
  std::vector<double> weight(n);
  for (int j = 0; j < n; ++j) {
    const double w = uniform_int(rng, 5, 30);
    const double v = w + uniform_int(rng, -4, 10);
    weight[j] = w;
    p.add_variable(label('C', j), -std::max(1.0, v), 0.0, range[j], true);
  }
  for (int i = 0; i < params.num_rows; ++i) {
    std::vector<double> a(n);
    double full = 0.0;
    for (int j = 0; j < n; ++j) {
      a[j] = i == 0 ? weight[j] : uniform_int(rng, 1, 30);
      full += a[j] * range[j];
    }
    const double capacity = std::floor(full * uniform_real(rng, 0.35, 0.65)) + 0.5 * (i % 2);
    p.add_row(label('R', i), std::move(a), RowSense::kLessEqual, capacity);
  }
  return p;
}

Milp setcover(const GeneratorParams& params, std::mt19937_64& rng) {
  Milp p;
  const int n = params.num_vars;
  const int m = params.num_rows;
  for (int j = 0; j < n; ++j) {
    p.add_variable(label('C', j), uniform_int(rng, 1, 10), 0.0, 1.0, true);
  }
  const double density = std::min(0.5, std::max(0.15, 3.0 / n));
  for (int i = 0; i < m; ++i) {
    std::vector<double> a(n, 0.0);
    int covered = 0;
    for (int j = 0; j < n; ++j) {
      if (uniform_real(rng, 0.0, 1.0) < density) {
        a[j] = 1.0;
        ++covered;
      }
    }
    while (covered < 2 && covered < n) {
      const int j = uniform_int(rng, 0, n - 1);
      if (a[j] == 0.0) {
        a[j] = 1.0;
        ++covered;
      }
    }
    p.add_row(label('R', i), std::move(a), RowSense::kGreaterEqual, 1.0);
  }
  return p;
}

// Rows are built around a random reference point, which stays feasible.
Milp mixed(const GeneratorParams& params, std::mt19937_64& rng) {
  Milp p;
  const int n = params.num_vars;
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "mixed instances need at least 2 variables");
  const int num_cont = std::clamp(
      static_cast<int>(std::ceil(params.continuous_fraction * n - 1e-9)), 1, n - 1);
  const int num_int = n - num_cont;
  const std::vector<int> range = integer_ranges(rng, num_int, params);

  // Interleave continuous columns among the integer ones.
  std::vector<bool> is_int(n, false);
  for (int k = 0; k < num_int; ++k) is_int[k] = true;
  std::shuffle(is_int.begin(), is_int.end(), rng);

  std::vector<double> ref(n);
  int next_int = 0;
  for (int j = 0; j < n; ++j) {
    double lo, hi;
    if (is_int[j]) {
      const int r = range[next_int++];
      lo = uniform_int(rng, 0, 3) == 0 ? uniform_int(rng, -2, 2) : 0.0;
      hi = lo + r;
      ref[j] = uniform_int(rng, static_cast<int>(lo), static_cast<int>(hi));
    } else {
      lo = uniform_int(rng, 0, 2) == 0 ? eighths(uniform_real(rng, -3.0, 0.0)) : 0.0;
      hi = lo + eighths(uniform_real(rng, 1.0, 8.0));
      ref[j] = eighths(uniform_real(rng, lo, hi));
    }
    const double cost = uniform_int(rng, -10, 10);
    p.add_variable(label('C', j), cost == 0.0 ? -1.0 : cost, lo, hi, is_int[j]);
  }

  for (int i = 0; i < params.num_rows; ++i) {
    std::vector<double> a(n, 0.0);
    double act = 0.0;
    bool touches_continuous = false;
    for (int j = 0; j < n; ++j) {
      if (uniform_real(rng, 0.0, 1.0) < 0.7) {
        a[j] = is_int[j] ? uniform_int(rng, -6, 9) : eighths(uniform_real(rng, -4.0, 4.0));
        if (!is_int[j] && a[j] != 0.0) touches_continuous = true;
      }
      act += a[j] * ref[j];
    }
    const int kind = uniform_int(rng, 0, 5);
    RowSense sense = kind < 3 ? RowSense::kLessEqual
                     : kind < 5 ? RowSense::kGreaterEqual
                                : RowSense::kEqual;
    // Equality rows only where a continuous column can absorb them.
    if (sense == RowSense::kEqual && !touches_continuous) sense = RowSense::kLessEqual;
    const double slack = eighths(uniform_real(rng, 0.0, 3.0)) + 0.375;
    const double rhs = sense == RowSense::kLessEqual    ? act + slack
                       : sense == RowSense::kGreaterEqual ? act - slack
                                                          : act;
    p.add_row(label('R', i), std::move(a), sense, rhs);
  }
  return p;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kKnapsack: return "knapsack";
    case Family::kSetCover: return "setcover";
    case Family::kMixed: return "mixed";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "knapsack") return Family::kKnapsack;
  if (name == "setcover") return Family::kSetCover;
  if (name == "mixed") return Family::kMixed;
  throw Error(ErrorCode::kInvalidParams, "unknown family '" + std::string(name) + "'");
}

Milp generate_instance(Family family, const GeneratorParams& params, std::uint64_t seed) {
  if (params.num_vars < 1 || params.num_vars > 2000 || params.num_rows < 1 ||
      params.num_rows > 2000 || params.max_range < 1 || params.max_range > 1000 ||
      params.continuous_fraction < 0.0 || params.continuous_fraction >= 1.0 ||
      params.max_grid < 0.0) {
    throw Error(ErrorCode::kInvalidParams, "generator sizes out of range");
  }
  std::mt19937_64 rng(seed ^ (static_cast<std::uint64_t>(family) << 56));
  Milp p;
  switch (family) {
    case Family::kKnapsack: p = knapsack(params, rng); break;
    case Family::kSetCover: p = setcover(params, rng); break;
    case Family::kMixed: p = mixed(params, rng); break;
  }
  p.name = std::string(to_string(family)) + "_n" + std::to_string(params.num_vars) + "_m" +
           std::to_string(params.num_rows) + "_s" + std::to_string(seed);
  return p;
}

}  // namespace splitbranch
