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

// Gomory mixed-integer (GMI) and weak-GMI cuts from simplex tableau rows,
// their split disjunctions, efficacy scoring, and space conversions.
//
// A tableau row for basic column j reads
//
//   x_j + sum_i abar_i * xloc_i = xbar_j,     xloc_i >= 0, 0 at the vertex,
//
// with f0 = frac(xbar_j) and f_i = frac(abar_i). The GMI cut in local
// (nonbasic) space is gamma . xloc >= 1 where
//
//   integer i, f_i <= f0 :  f_i / f0
//   integer i, f_i >  f0 :  (1 - f_i) / (1 - f0)
//   continuous, abar >= 0:  abar / f0
//   continuous, abar <  0:  -abar / (1 - f0)
//
// The weak-GMI cut applies the continuous rule to every column; it is the
// unstrengthened intersection cut of the elementary split on x_j. The GMI cut
// is the intersection cut of the split (pi^G, floor(xbar_j)) returned by
// split_of_gmi.
//
// Cuts are always stored as coefficients . x <= rhs, so the >= 1 form above is
// kept as -gamma . xloc <= -1.

#ifndef SPLITBRANCH_CUTGEN_HPP_
#define SPLITBRANCH_CUTGEN_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "splitbranch/cut.hpp"
#include "splitbranch/model.hpp"
#include "splitbranch/simplex.hpp"

namespace splitbranch {

struct CutSettings {
  double f0_min = 1e-4;           // rows with f0 outside [f0_min, 1-f0_min] skipped
  double zero_tol = 1e-12;        // smaller coefficients are dropped
  double max_dynamism = 1e10;     // max|gamma| / min|gamma|
  double efficacy_min = 1e-4;     // separation: weaker cuts are not added
  int max_cuts_per_round = 10;
  double int_tol = 1e-6;
  bool score_in_nonbasic_space = false;
};

enum class RowGate { kAccepted, kRhsTooIntegral, kNumericallyUnsafe };

struct RowCut {
  RowGate gate = RowGate::kAccepted;
  Cut cut;  // meaningful only when gate == kAccepted
};

// Non-throwing derivation used on hot paths. `int_mask` has one entry per LP
// column; it is ignored for CutKind::kWeakGmi.
RowCut derive_row_cut(const TableauRow& row, const std::vector<bool>& int_mask,
                      CutKind kind, const CutSettings& settings = {});

// Throw Error(kRhsTooIntegral) or Error(kNumericallyUnsafe) for gated rows.
Cut gmi_from_row(const TableauRow& row, const std::vector<bool>& int_mask,
                 const CutSettings& settings = {});
Cut weak_gmi_from_row(const TableauRow& row, const CutSettings& settings = {});

// (alpha.x - beta) / ||alpha||; positive iff x violates the cut.
// Throws Error(kZeroNorm) for an empty cut.
double efficacy(const Cut& cut, std::span<const double> x);

// Efficacy of a nonbasic-space cut at the basic solution it was derived
// from (all local variables 0), i.e. 1 / ||gamma||.
double nonbasic_efficacy(const Cut& cut);

// Local (nonbasic) space -> standard-form structural columns: undoes the
// bound shifts/complementations of `res` and substitutes every slack and cut
// slack by its defining row. alpha.x - beta at the basic solution is kept.
Cut to_structural_space(const Cut& cut, const StandardForm& sf,
                        const LpResult& res);

// Standard-form structural space -> original Milp variables.
Cut to_original_space(const Cut& cut, const StandardForm& sf);

// (e_j, floor(lp_value)). Throws Error(kNotFractional) when lp_value is
// within `int_tol` of an integer.
SplitDisjunction elementary_split(int j, double lp_value, double int_tol = 1e-6);

// pi^G of a tableau row in local (LP column) space. Throws
// Error(kRhsTooIntegral) for gated rows.
SplitDisjunction split_of_gmi(const TableauRow& row,
                              const std::vector<bool>& int_mask,
                              const CutSettings& settings = {});

// Local-space split -> original Milp variables (shifts and complementations of
// integer columns are integral, so pi stays integral).
SplitDisjunction split_to_original(const SplitDisjunction& split,
                                   const StandardForm& sf, const LpResult& res);

// Exhaustive validity check of a cut in original space: enumerates every
// integer assignment within bounds and maximizes alpha.x over the continuous
// remainder with solve_lp. `lower`/`upper` optionally replace the Milp bounds
// (e.g. node-local bounds). Throws Error(kTooLargeToEnumerate) when an integer
// variable is unbounded or the grid exceeds `max_assignments`.
bool check_cut_validity(const Milp& p, const Cut& cut, double tol = 1e-6,
                        const std::vector<double>* lower = nullptr,
                        const std::vector<double>* upper = nullptr,
                        double max_assignments = 1e6);

// Caches the integer-feasible assignments of `p` so many cuts can be checked
// against the same instance. Same semantics as check_cut_validity.
class CutValidator {
 public:
  explicit CutValidator(const Milp& p, double max_assignments = 1e6);

  bool is_valid(const Cut& cut, double tol = 1e-6,
                const std::vector<double>* lower = nullptr,
                const std::vector<double>* upper = nullptr) const;

  // Integer assignments (over p.integer_indices()) with a feasible continuous
  // completion.
  const std::vector<std::vector<double>>& feasible_assignments() const {
    return assignments_;
  }
  const std::vector<int>& integer_indices() const { return int_idx_; }

 private:
  Milp p_;
  std::vector<int> int_idx_;
  std::vector<int> cont_idx_;
  std::vector<std::vector<double>> assignments_;
  // Continuous subproblem for each assignment (empty when pure integer).
  std::vector<StandardForm> slices_;
};

// One cut observed while it is generated (separation or branching scores).
struct CutEvent {
  const TableauRow& row;
  const Cut& nonbasic;    // as derived, local space
  const Cut& structural;  // after to_structural_space
  const LpResult& lp;
};
using CutObserver = std::function<void(const CutEvent&)>;

struct ScoredCut {
  Cut cut;               // standard-form structural space
  double efficacy = 0.0; // in the configured scoring space
  int variable = -1;     // generating structural column
};

struct SeparationRound {
  std::vector<ScoredCut> generated;  // every non-gated GMI cut of the round
  std::vector<ScoredCut> selected;   // top-N with efficacy >= efficacy_min
};

// One GMI cut per fractional basic integer row; keeps the top
// `max_cuts_per_round` by efficacy (ties: lower generating column).
SeparationRound separate_round(const StandardForm& sf, const LpResult& res,
                               const CutSettings& settings = {},
                               const CutObserver* observer = nullptr);

// Efficacy of a tableau-derived cut in the configured space; `structural`
// must be to_structural_space(nonbasic, ...).
double score_cut(const Cut& nonbasic, const Cut& structural,
                 const LpResult& res, const CutSettings& settings);

}  // namespace splitbranch

#endif  // SPLITBRANCH_CUTGEN_HPP_
