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

// Problem representation for mixed-integer linear programs.
//
// A `Milp` is the user-facing minimization problem
//
//   min c.x  s.t.  a_k.x {<=,=,>=} b_k,  l <= x <= u,  x_i integer for i in J.
//
// `standardize` rewrites it into the equality form used by the simplex:
//
//   min c'.y  s.t.  A'y = b',  0 <= y <= u',
//
// where the first `num_structural` columns of y are the original variables
// (shifted by a finite lower bound, or negated against a finite upper bound)
// and the remaining columns are one nonnegative slack per inequality row.
// The column order of the structural part matches the original variable
// order, so structural column i always corresponds to original variable i.

#ifndef SPLITBRANCH_MODEL_HPP_
#define SPLITBRANCH_MODEL_HPP_

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace splitbranch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

struct Row {
  std::string name;
  std::vector<double> coefficients;  // dense, one entry per variable
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;

  friend bool operator==(const Row&, const Row&) = default;
};

struct Milp {
  std::string name;
  std::string objective_name = "obj";
  std::vector<std::string> var_names;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> integer;
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  std::vector<int> integer_indices() const;

  // Appends a variable and returns its index.
  int add_variable(std::string var_name, double cost, double lb, double ub,
                   bool is_integer);
  // Appends a row; `coefficients` must have num_vars() entries.
  int add_row(std::string row_name, std::vector<double> coefficients,
              RowSense sense, double rhs);

  // Throws Error(kInvalidModel) on size mismatches, non-finite coefficients or
  // out-of-range names, and Error(kInconsistentBounds) when some l_i > u_i.
  void validate() const;

  friend bool operator==(const Milp&, const Milp&) = default;
};

struct Tolerances {
  double feasibility = 1e-7;
  double integrality = 1e-6;
};

// Constraint, bound and (optionally) integrality check of `x` against `p`.
bool check_feasible(const Milp& p, std::span<const double> x,
                    const Tolerances& tol = {}, bool check_integrality = true);

// c.x; throws Error(kLengthMismatch) when x has the wrong size.
double objective_value(const Milp& p, std::span<const double> x);

enum class SolutionStatus { kOptimal, kFeasible, kInfeasible, kUnbounded, kLimit };

std::string_view to_string(SolutionStatus status);

struct Solution {
  // Empty when no primal point is known (infeasible, or the incumbent came
  // from a provided objective value).
  std::vector<double> values;
  double objective = kInfinity;
  SolutionStatus status = SolutionStatus::kInfeasible;
};

// How one standard-form column relates to the original problem.
struct ColumnOrigin {
  enum class Kind { kShifted, kNegated, kSlack };
  Kind kind = Kind::kShifted;
  // Original variable index (kShifted/kNegated) or row index (kSlack).
  int index = 0;
  // kShifted: x = offset + y.  kNegated: x = offset - y.  Unused for slacks.
  double offset = 0.0;
};

// Per-column bounds over the standard-form columns.
struct ColumnBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct StandardForm {
  std::shared_ptr<const Milp> base;
  int num_rows = 0;
  int num_structural = 0;
  int num_slacks = 0;
  std::vector<double> matrix;  // row-major, num_rows x num_cols()
  std::vector<double> rhs;
  std::vector<double> cost;
  std::vector<double> upper;   // lower bound is 0 for every column
  std::vector<bool> integer;
  std::vector<ColumnOrigin> var_map;
  std::vector<int> slack_of_row;  // column index, or -1 for equality rows
  double objective_offset = 0.0;

  int num_cols() const { return num_structural + num_slacks; }
  double at(int row, int col) const { return matrix[row * num_cols() + col]; }

  // Original-space point for the structural part of y (slacks ignored).
  std::vector<double> to_original(std::span<const double> y) const;
  // Standard-form point (structural and slack columns) for an original x.
  std::vector<double> to_standard(std::span<const double> x) const;
  // Objective in original space of a standard-form point.
  double original_objective(std::span<const double> y) const;

  // Standard-form column bounds implied by original-space variable bounds.
  // Slack columns keep [0, inf).
  ColumnBounds column_bounds(std::span<const double> orig_lower,
                             std::span<const double> orig_upper) const;
  ColumnBounds default_bounds() const;
};

// Throws Error(kFreeVariableUnsupported) for variables with both bounds
// infinite and Error(kInconsistentBounds) when l > u (after integer rounding).
StandardForm standardize(const Milp& p);

}  // namespace splitbranch

#endif  // SPLITBRANCH_MODEL_HPP_
