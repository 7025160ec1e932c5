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

// Bounded-variable primal simplex over a StandardForm, optionally extended
// with cut rows, exposing the optimal basis and individual tableau rows.
//
// Column layout of the LP actually solved:
//   [0, sf.num_cols())                 standard-form columns
//   [sf.num_cols(), +#equality rows)   one artificial per equality row, fixed
//                                      at 0 (gives every row a unit column for
//                                      the cold-start basis)
//   [..., +#cuts)                      one slack per appended cut row
// Row layout: the standard-form rows followed by one row per cut.

#ifndef SPLITBRANCH_SIMPLEX_HPP_
#define SPLITBRANCH_SIMPLEX_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "splitbranch/cut.hpp"
#include "splitbranch/model.hpp"

namespace splitbranch {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string_view to_string(LpStatus status);

enum class ColumnStatus : std::uint8_t { kBasic, kAtLower, kAtUpper };

enum class ColumnRole : std::uint8_t { kStructural, kSlack, kArtificial, kCutSlack };

struct Basis {
  std::vector<int> basic;             // column in each row position
  std::vector<ColumnStatus> status;   // one entry per LP column
};

// The assembled LP. Shared (read-only) by every result it produced.
struct LpData {
  int num_rows = 0;
  int num_cols = 0;
  int num_structural = 0;
  int num_sf_cols = 0;
  int num_sf_rows = 0;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<ColumnRole> role;
  // For kSlack / kCutSlack / kArtificial columns: the row they belong to.
  std::vector<int> row_of_column;
  double objective_offset = 0.0;
};

struct LpLimits {
  std::int64_t max_iterations = 200000;
  int stall_threshold = 1000;  // consecutive degenerate pivots before Bland
  int refactor_interval = 50;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  double objective = kInfinity;  // original-space objective, offset included
  std::vector<double> values;    // one entry per LP column
  Basis basis;
  std::int64_t iterations = 0;
  bool used_warm_start = false;
  bool used_bland = false;
  std::shared_ptr<const LpData> lp;
  std::shared_ptr<const Eigen::MatrixXd> basis_inverse;
  std::vector<int> position;  // row position of each basic column, else -1

  std::span<const double> structural() const {
    return std::span<const double>(values).first(lp->num_structural);
  }
  // Standard-form part (structural and slack columns).
  std::span<const double> standard() const {
    return std::span<const double>(values).first(lp->num_sf_cols);
  }
  bool is_basic(int column) const { return position[column] >= 0; }
};

// Solves min c.y over the standard form with `cuts` (kStandard space, as
// coefficients . y <= rhs) appended as rows. `bounds` overrides the
// standard-form column bounds (nullptr: sf defaults). `start` is used as a
// warm start when it is structurally compatible and nonsingular; a basis with
// fewer cut rows is extended with the new cut slacks as basic. Any warm-start
// failure falls back to the slack/artificial basis.
//
// Throws Error(kNumericalFailure) when the basis stays singular after a cold
// restart.
LpResult solve_lp(const StandardForm& sf, std::span<const Cut> cuts = {},
                  const ColumnBounds* bounds = nullptr,
                  const Basis* start = nullptr, const LpLimits& limits = {});

// Nonbasic entry of a tableau row. `complemented` is set when the column sits
// at its upper bound and was substituted by (u - x); otherwise the local
// variable is (x - l). Either way the local variable is >= 0 and 0 at the
// basic solution.
struct TableauEntry {
  int column = 0;
  double coefficient = 0.0;
  bool complemented = false;
  bool fixed = false;  // lower == upper, local variable identically 0
};

// x_j + sum_i entries[i].coefficient * xlocal_i = rhs, where rhs is the value
// of x_j at the basic solution.
struct TableauRow {
  int basic_column = 0;
  double rhs = 0.0;
  std::vector<TableauEntry> entries;  // every nonbasic column, ascending
};

// Throws Error(kNotBasic) when `column` is not basic in `res`.
TableauRow tableau_row(const LpResult& res, int column);

struct FractionalBasic {
  int column = 0;        // structural column (== original variable index)
  double fraction = 0.0; // frac of the standard-form value
};

// Integer structural columns whose LP value is at least `int_tol` away from
// the nearest integer, ascending by column.
std::vector<FractionalBasic> fractional_basics(const LpResult& res,
                                               const StandardForm& sf,
                                               double int_tol = 1e-6);

// Reduced costs c_k - y.A_k for every column (0 for basic columns).
std::vector<double> reduced_costs(const LpResult& res);

// Integrality mask over the columns of res.lp: true for integer structural
// columns, false for slacks, cut slacks and artificials.
std::vector<bool> lp_integer_mask(const LpResult& res, const StandardForm& sf);

}  // namespace splitbranch

#endif  // SPLITBRANCH_SIMPLEX_HPP_
