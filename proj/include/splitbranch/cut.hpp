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

#ifndef SPLITBRANCH_CUT_HPP_
#define SPLITBRANCH_CUT_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace splitbranch {

// Which index space a cut or split lives in.
//  kNonbasic: columns of one LP (structural, slack, cut-slack, artificial),
//             with nonbasic columns complemented so they sit at 0.
//  kStandard: structural columns of a StandardForm.
//  kOriginal: variables of the Milp.
enum class CutSpace { kNonbasic, kStandard, kOriginal };

enum class CutKind { kGmi, kWeakGmi, kOther };

std::string_view to_string(CutKind kind);

// Sparse inequality stored canonically as coefficients . x <= rhs.
struct Cut {
  std::vector<int> indices;
  std::vector<double> coefficients;
  double rhs = 0.0;
  CutSpace space = CutSpace::kStandard;
  CutKind kind = CutKind::kOther;
  // LP column of the basic variable whose tableau row produced the cut, or -1.
  int source_column = -1;

  double activity(std::span<const double> x) const {
    double value = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      value += coefficients[k] * x[indices[k]];
    }
    return value;
  }
  double norm() const;
  // Coefficient of `index` (0 when absent). Linear scan.
  double coefficient(int index) const;
};

// The split pi.x <= pi0  OR  pi.x >= pi0 + 1, pi integral.
struct SplitDisjunction {
  std::vector<int> indices;
  std::vector<std::int64_t> coefficients;
  std::int64_t rhs = 0;
  CutSpace space = CutSpace::kOriginal;

  std::int64_t coefficient(int index) const;
};

}  // namespace splitbranch

#endif  // SPLITBRANCH_CUT_HPP_
