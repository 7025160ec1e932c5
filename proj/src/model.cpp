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

#include "splitbranch/model.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "splitbranch/error.hpp"

namespace splitbranch {

std::vector<int> Milp::integer_indices() const {
  std::vector<int> out;
  for (int i = 0; i < num_vars(); ++i) {
    if (integer[i]) out.push_back(i);
  }
  return out;
}

int Milp::add_variable(std::string var_name, double cost, double lb, double ub,
                       bool is_integer) {
  var_names.push_back(std::move(var_name));
  objective.push_back(cost);
  lower.push_back(lb);
  upper.push_back(ub);
  integer.push_back(is_integer);
  for (Row& row : rows) row.coefficients.push_back(0.0);
  return num_vars() - 1;
}

int Milp::add_row(std::string row_name, std::vector<double> coefficients,
                  RowSense sense, double rhs) {
  if (static_cast<int>(coefficients.size()) != num_vars()) {
    throw Error(ErrorCode::kLengthMismatch,
                "row '" + row_name + "' has " +
                    std::to_string(coefficients.size()) + " coefficients for " +
                    std::to_string(num_vars()) + " variables");
  }
  rows.push_back(Row{std::move(row_name), std::move(coefficients), sense, rhs});
  return num_rows() - 1;
}

void Milp::validate() const {
  const auto n = objective.size();
  if (lower.size() != n || upper.size() != n || integer.size() != n ||
      var_names.size() != n) {
    throw Error(ErrorCode::kInvalidModel, "per-variable arrays differ in size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(objective[i])) {
      throw Error(ErrorCode::kInvalidModel,
                  "non-finite objective coefficient on " + var_names[i]);
    }
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] == kInfinity ||
        upper[i] == -kInfinity) {
      throw Error(ErrorCode::kInvalidModel, "bad bound on " + var_names[i]);
    }
    if (lower[i] > upper[i]) {
      throw Error(ErrorCode::kInconsistentBounds,
                  var_names[i] + ": lower bound exceeds upper bound");
    }
  }
  for (const Row& row : rows) {
    if (row.coefficients.size() != n) {
      throw Error(ErrorCode::kInvalidModel,
                  "row '" + row.name + "' has the wrong length");
    }
    if (!std::isfinite(row.rhs)) {
      throw Error(ErrorCode::kInvalidModel, "non-finite rhs on " + row.name);
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw Error(ErrorCode::kInvalidModel,
                    "non-finite coefficient in row " + row.name);
      }
    }
  }
}

bool check_feasible(const Milp& p, std::span<const double> x,
                    const Tolerances& tol, bool check_integrality) {
  if (static_cast<int>(x.size()) != p.num_vars()) return false;
  for (int i = 0; i < p.num_vars(); ++i) {
    if (x[i] < p.lower[i] - tol.feasibility) return false;
    if (x[i] > p.upper[i] + tol.feasibility) return false;
    if (check_integrality && p.integer[i] &&
        std::abs(x[i] - std::round(x[i])) > tol.integrality) {
      return false;
    }
  }
  for (const Row& row : p.rows) {
    double activity = 0.0;
    for (int i = 0; i < p.num_vars(); ++i) activity += row.coefficients[i] * x[i];
    switch (row.sense) {
      case RowSense::kLessEqual:
        if (activity > row.rhs + tol.feasibility) return false;
        break;
      case RowSense::kGreaterEqual:
        if (activity < row.rhs - tol.feasibility) return false;
        break;
      case RowSense::kEqual:
        if (std::abs(activity - row.rhs) > tol.feasibility) return false;
        break;
    }
  }
  return true;
}

double objective_value(const Milp& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.num_vars()) {
    throw Error(ErrorCode::kLengthMismatch,
                "point has " + std::to_string(x.size()) + " entries, model has " +
                    std::to_string(p.num_vars()) + " variables");
  }
  double value = 0.0;
  for (int i = 0; i < p.num_vars(); ++i) value += p.objective[i] * x[i];
  return value;
}

std::string_view to_string(SolutionStatus status) {
  switch (status) {
    case SolutionStatus::kOptimal: return "optimal";
    case SolutionStatus::kFeasible: return "feasible";
    case SolutionStatus::kInfeasible: return "infeasible";
    case SolutionStatus::kUnbounded: return "unbounded";
    case SolutionStatus::kLimit: return "limit";
  }
  return "unknown";
}

std::vector<double> StandardForm::to_original(std::span<const double> y) const {
  std::vector<double> x(num_structural);
  for (int i = 0; i < num_structural; ++i) {
    const ColumnOrigin& o = var_map[i];
    x[o.index] = o.kind == ColumnOrigin::Kind::kShifted ? o.offset + y[i]
                                                          : o.offset - y[i];
  }
  return x;
}

std::vector<double> StandardForm::to_standard(std::span<const double> x) const {
  std::vector<double> y(num_cols(), 0.0);
  for (int i = 0; i < num_structural; ++i) {
    const ColumnOrigin& o = var_map[i];
    y[i] = o.kind == ColumnOrigin::Kind::kShifted ? x[o.index] - o.offset
                                                    : o.offset - x[o.index];
  }
  for (int r = 0; r < num_rows; ++r) {
    const int s = slack_of_row[r];
    if (s < 0) continue;
    double activity = 0.0;
    for (int i = 0; i < num_structural; ++i) activity += at(r, i) * y[i];
    y[s] = rhs[r] - activity;
  }
  return y;
}

double StandardForm::original_objective(std::span<const double> y) const {
  double value = objective_offset;
  for (int i = 0; i < num_structural; ++i) value += cost[i] * y[i];
  return value;
}

ColumnBounds StandardForm::column_bounds(
    std::span<const double> orig_lower,
    std::span<const double> orig_upper) const {
  ColumnBounds b{std::vector<double>(num_cols(), 0.0),
                 std::vector<double>(num_cols(), kInfinity)};
  for (int i = 0; i < num_structural; ++i) {
    const ColumnOrigin& o = var_map[i];
    const double lo = orig_lower[o.index];
    const double hi = orig_upper[o.index];
    if (o.kind == ColumnOrigin::Kind::kShifted) {
      b.lower[i] = lo - o.offset;
      b.upper[i] = hi - o.offset;
    } else {
      b.lower[i] = o.offset - hi;
      b.upper[i] = o.offset - lo;
    }
  }
  return b;
}

ColumnBounds StandardForm::default_bounds() const {
  return ColumnBounds{std::vector<double>(num_cols(), 0.0), upper};
}

StandardForm standardize(const Milp& p) {
  p.validate();
  const int n = p.num_vars();
  const int m = p.num_rows();

  StandardForm sf;
  sf.base = std::make_shared<const Milp>(p);
  sf.num_rows = m;
  sf.num_structural = n;

  // Column transforms. Integer bounds are rounded inward first so every
  // shift of an integer column is integral.
  std::vector<double> scale(n);  // +1 shifted, -1 negated
  for (int i = 0; i < n; ++i) {
    double lb = p.lower[i];
    double ub = p.upper[i];
    if (p.integer[i]) {
      lb = std::ceil(lb - 1e-9);
      ub = std::floor(ub + 1e-9);
    }
    if (lb > ub) {
      throw Error(ErrorCode::kInconsistentBounds,
                  p.var_names[i] + " has no integer value within its bounds");
    }
    ColumnOrigin origin;
    origin.index = i;
    if (std::isfinite(lb)) {
      origin.kind = ColumnOrigin::Kind::kShifted;
      origin.offset = lb;
      sf.upper.push_back(ub - lb);
      scale[i] = 1.0;
    } else if (std::isfinite(ub)) {
      origin.kind = ColumnOrigin::Kind::kNegated;
      origin.offset = ub;
      sf.upper.push_back(kInfinity);
      scale[i] = -1.0;
    } else {
      throw Error(ErrorCode::kFreeVariableUnsupported,
                  p.var_names[i] + " has no finite bound");
    }
    sf.var_map.push_back(origin);
    sf.integer.push_back(p.integer[i]);
    sf.cost.push_back(scale[i] * p.objective[i]);
    sf.objective_offset += p.objective[i] * origin.offset;
  }

  sf.slack_of_row.assign(m, -1);
  for (int r = 0; r < m; ++r) {
    if (p.rows[r].sense != RowSense::kEqual) {
      sf.slack_of_row[r] = n + sf.num_slacks++;
    }
  }
  const int cols = sf.num_cols();
  sf.matrix.assign(static_cast<std::size_t>(m) * cols, 0.0);
  sf.rhs.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    const Row& row = p.rows[r];
    const double sign = row.sense == RowSense::kGreaterEqual ? -1.0 : 1.0;
    double rhs = sign * row.rhs;
    for (int i = 0; i < n; ++i) {
      const double a = sign * row.coefficients[i];
      if (a == 0.0) continue;
      sf.matrix[r * cols + i] = scale[i] * a;
      rhs -= a * sf.var_map[i].offset;
    }
    sf.rhs[r] = rhs;
    if (sf.slack_of_row[r] >= 0) sf.matrix[r * cols + sf.slack_of_row[r]] = 1.0;
  }
  for (int r = 0; r < m; ++r) {
    if (sf.slack_of_row[r] < 0) continue;
    ColumnOrigin origin;
    origin.kind = ColumnOrigin::Kind::kSlack;
    origin.index = r;
    sf.var_map.push_back(origin);
    sf.upper.push_back(kInfinity);
    sf.integer.push_back(false);
    sf.cost.push_back(0.0);
  }
  return sf;
}

}  // namespace splitbranch
