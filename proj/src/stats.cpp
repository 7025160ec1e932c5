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
#include <numeric>
#include <vector>

#include "splitbranch/bench.hpp"
#include "splitbranch/error.hpp"

namespace splitbranch {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double shifted_geometric_mean(std::span<const double> values, double shift) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values to average");
  if (!(shift > 0.0)) throw Error(ErrorCode::kInvalidParams, "shift must be positive");
  double log_sum = 0.0;
  double lo = values[0];
  double hi = values[0];
  for (double v : values) {
    if (!(v >= 0.0)) throw Error(ErrorCode::kInvalidParams, "values must be nonnegative");
    log_sum += std::log(v + shift);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double sgm = std::exp(log_sum / static_cast<double>(values.size())) - shift;
  // Round-off can push the result just outside [min, max].
  return std::clamp(sgm, lo, hi);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs) {
  std::vector<double> nz;
  for (double d : diffs) {
    if (d != 0.0) nz.push_back(d);
  }
  if (nz.empty()) throw Error(ErrorCode::kAllZeroDiffs, "all paired differences are zero");
  const int n = static_cast<int>(nz.size());

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(nz[a]) < std::abs(nz[b]); });
  // Doubled mid-ranks are integers, which keeps the exact distribution on a
  // lattice.
  std::vector<int> rank2(n);
  double tie_term = 0.0;
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && std::abs(nz[order[j + 1]]) == std::abs(nz[order[i]])) ++j;
    const int t = j - i + 1;
    for (int k = i; k <= j; ++k) rank2[order[k]] = i + 1 + j + 1;
    tie_term += static_cast<double>(t) * t * t - t;
    i = j + 1;
  }

  WilcoxonResult r;
  r.n = n;
  int w2_plus = 0;
  int total2 = 0;
  for (int i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (nz[i] > 0) w2_plus += rank2[i];
  }
  r.w_plus = w2_plus / 2.0;
  r.w_minus = (total2 - w2_plus) / 2.0;

  if (n <= 20) {
    r.exact = true;
    // count[s] = number of sign patterns with doubled W+ equal to s.
    std::vector<double> count(total2 + 1, 0.0);
    count[0] = 1.0;
    int reach = 0;
    for (int i = 0; i < n; ++i) {
      for (int s = reach; s >= 0; --s) {
        if (count[s] != 0.0) count[s + rank2[i]] += count[s];
      }
      reach += rank2[i];
    }
    const double patterns = std::ldexp(1.0, n);
    double le = 0.0;
    double ge = 0.0;
    for (int s = 0; s <= total2; ++s) {
      if (s <= w2_plus) le += count[s];
      if (s >= w2_plus) ge += count[s];
    }
    r.p_less = le / patterns;
    r.p_greater = ge / patterns;
  } else {
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double sd = std::sqrt(var);
    r.p_less = normal_cdf((r.w_plus - mean + 0.5) / sd);
    r.p_greater = 1.0 - normal_cdf((r.w_plus - mean - 0.5) / sd);
  }
  r.p_less = std::min(1.0, r.p_less);
  r.p_greater = std::min(1.0, r.p_greater);
  r.p_two_sided = std::min(1.0, 2.0 * std::min(r.p_less, r.p_greater));
  return r;
}

}  // namespace splitbranch
