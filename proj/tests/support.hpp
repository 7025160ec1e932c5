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

// Instance builders shared by the unit and acceptance tests.

#ifndef SPLITBRANCH_TESTS_SUPPORT_HPP_
#define SPLITBRANCH_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <vector>

#include "splitbranch/model.hpp"
#include "splitbranch/simplex.hpp"

namespace support {

// Random LP with 2..6 variables, 1..5 rows and finite bounds (may be
// infeasible, never unbounded).
splitbranch::Milp random_lp(std::uint64_t seed);

// max_r |(A y - b)_r| over the standard-form rows for the LP solution.
double equality_residual(const splitbranch::StandardForm& sf,
                         const splitbranch::LpResult& res);

// The oracle tier: <= 8 integer variables, <= 5 rows, ranges <= 5, integer
// grid capped so enumeration stays cheap. Cycles through the three families.
splitbranch::Milp oracle_tier_instance(int index);

// Larger knapsack-type instances used for node-count comparisons.
splitbranch::Milp timing_tier_instance(int index);

}  // namespace support

#endif  // SPLITBRANCH_TESTS_SUPPORT_HPP_
