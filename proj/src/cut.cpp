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

#include "splitbranch/cut.hpp"

#include <cmath>

namespace splitbranch {

std::string_view to_string(CutKind kind) {
  switch (kind) {
    case CutKind::kGmi: return "gmi";
    case CutKind::kWeakGmi: return "weak_gmi";
    case CutKind::kOther: return "other";
  }
  return "unknown";
}

double Cut::norm() const {
  double sum = 0.0;
  for (double a : coefficients) sum += a * a;
  return std::sqrt(sum);
}

double Cut::coefficient(int index) const {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] == index) return coefficients[k];
  }
  return 0.0;
}

std::int64_t SplitDisjunction::coefficient(int index) const {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] == index) return coefficients[k];
  }
  return 0;
}

}  // namespace splitbranch
