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

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "splitbranch/bnb.hpp"
#include "splitbranch/cutgen.hpp"
#include "splitbranch/error.hpp"
#include "support.hpp"

namespace splitbranch {
namespace {

// gamma in >= form from a stored nonbasic cut.
double gamma_of(const Cut& cut, int column) { return -cut.coefficient(column); }

TableauRow make_row(int basic, double rhs, std::vector<std::pair<int, double>> entries) {
  TableauRow row;
  row.basic_column = basic;
  row.rhs = rhs;
  for (auto [col, a] : entries) row.entries.push_back(TableauEntry{col, a, false, false});
  return row;
}

TEST(GmiFromRowTest, HalfIntegralRow) {
  // x_j = 0.5 - 1.5 x_N with x_N integer.
  const TableauRow row = make_row(0, 0.5, {{1, 1.5}});
  const std::vector<bool> mask{true, true};
  const Cut gmi = gmi_from_row(row, mask);
  EXPECT_EQ(gmi.space, CutSpace::kNonbasic);
  EXPECT_EQ(gmi.kind, CutKind::kGmi);
  EXPECT_DOUBLE_EQ(gamma_of(gmi, 1), 1.0);
  EXPECT_DOUBLE_EQ(gmi.rhs, -1.0);
  // The generating point (local variables 0) violates it: 0 < 1.
  EXPECT_GT(0.0 - gmi.rhs, 0.0);
  const Cut weak = weak_gmi_from_row(row);
  EXPECT_DOUBLE_EQ(gamma_of(weak, 1), 3.0);
}

TEST(GmiFromRowTest, IntegerColumnAboveF0) {
  const TableauRow row = make_row(0, 2.25, {{1, 0.75}});
  const Cut gmi = gmi_from_row(row, {true, true});
  EXPECT_NEAR(gamma_of(gmi, 1), 1.0 / 3.0, 1e-15);
}

TEST(GmiFromRowTest, NegativeContinuousColumn) {
  const TableauRow row = make_row(0, 0.25, {{1, -2.0}});
  const Cut gmi = gmi_from_row(row, {true, false});
  EXPECT_NEAR(gamma_of(gmi, 1), 8.0 / 3.0, 1e-15);
}

TEST(GmiFromRowTest, ContinuousOnlyRowEqualsWeak) {
  const TableauRow row = make_row(0, 1.3, {{1, -2.0}, {2, 0.7}, {3, 4.1}});
  const std::vector<bool> mask{true, false, false, false};
  const Cut gmi = gmi_from_row(row, mask);
  const Cut weak = weak_gmi_from_row(row);
  EXPECT_EQ(gmi.indices, weak.indices);
  EXPECT_EQ(gmi.coefficients, weak.coefficients);
  EXPECT_EQ(gmi.rhs, weak.rhs);
}

TEST(GmiFromRowTest, RhsTooIntegral) {
  const TableauRow row = make_row(0, 3.000001, {{1, 0.5}});
  try {
    weak_gmi_from_row(row);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRhsTooIntegral);
  }
  EXPECT_THROW(gmi_from_row(row, {true, true}), Error);
  EXPECT_EQ(derive_row_cut(row, {true, true}, CutKind::kGmi).gate, RowGate::kRhsTooIntegral);
}

TEST(GmiFromRowTest, FixedColumnsAndDynamismGate) {
  TableauRow row = make_row(0, 0.5, {{1, 1.5}, {2, 2.0}});
  row.entries[1].fixed = true;
  const Cut gmi = gmi_from_row(row, {true, true, false});
  EXPECT_EQ(gmi.indices, std::vector<int>{1});
  const TableauRow wild = make_row(0, 0.5, {{1, 1e-9}, {2, 1e3}});
  EXPECT_EQ(derive_row_cut(wild, {true, false, false}, CutKind::kWeakGmi).gate,
            RowGate::kNumericallyUnsafe);
}

TEST(EfficacyTest, Examples) {
  Cut c;
  c.indices = {0, 1};
  c.coefficients = {3, 4};
  c.rhs = 1;
  EXPECT_DOUBLE_EQ(efficacy(c, std::vector<double>{1, 1}), 1.2);
  EXPECT_DOUBLE_EQ(efficacy(c, std::vector<double>{1, -0.5}), 0.0);
  Cut d;
  d.indices = {0};
  d.coefficients = {1};
  d.rhs = 0;
  EXPECT_DOUBLE_EQ(efficacy(d, std::vector<double>{-1, 0}), -1.0);
  Cut empty;
  try {
    efficacy(empty, std::vector<double>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroNorm);
  }
}

// LP {x1 + x2 + s = 1.5}, min -2 x1 - x2: x1 basic, x2 and s nonbasic.
struct SlackExample {
  Milp p;
  StandardForm sf;
  LpResult res;
  SlackExample(bool bounded_x2) {
    p.add_variable("x1", -2, 0, kInfinity, true);
    p.add_variable("x2", bounded_x2 ? 1 : -1, 0, bounded_x2 ? 1 : kInfinity, true);
    p.add_row("r", {1, 1}, RowSense::kLessEqual, 1.5);
    sf = standardize(p);
    res = solve_lp(sf);
  }
};

TEST(ToStructuralSpaceTest, StructuralOnlyCutIsUnchanged) {
  SlackExample ex(false);
  Cut cut;
  cut.space = CutSpace::kNonbasic;
  cut.indices = {1};
  cut.coefficients = {-3};
  cut.rhs = -1;
  const Cut s = to_structural_space(cut, ex.sf, ex.res);
  EXPECT_EQ(s.space, CutSpace::kStandard);
  EXPECT_EQ(s.indices, std::vector<int>{1});
  EXPECT_EQ(s.coefficients, std::vector<double>{-3});
  EXPECT_EQ(s.rhs, -1.0);
}

TEST(ToStructuralSpaceTest, SlackIsSubstitutedAndViolationKept) {
  SlackExample ex(false);
  const int slack = ex.sf.slack_of_row[0];
  Cut cut;
  cut.space = CutSpace::kNonbasic;
  cut.indices = {slack};
  cut.coefficients = {-2};
  cut.rhs = -1;
  // -2 s <= -1 with s = 1.5 - x1 - x2  ->  2 x1 + 2 x2 <= 2.
  const Cut s = to_structural_space(cut, ex.sf, ex.res);
  EXPECT_DOUBLE_EQ(s.coefficient(0), 2.0);
  EXPECT_DOUBLE_EQ(s.coefficient(1), 2.0);
  EXPECT_DOUBLE_EQ(s.rhs, 2.0);
  EXPECT_NEAR(s.activity(ex.res.structural()) - s.rhs, 1.0, 1e-12);
}

TEST(ToStructuralSpaceTest, ComplementedColumn) {
  // x2 has cost +1 -> stays at its lower bound; flip the cost to reach the
  // upper bound 1 instead.
  Milp p;
  p.add_variable("x1", -1, 0, kInfinity, true);
  p.add_variable("x2", -3, 0, 1, true);
  p.add_row("r", {1, 1}, RowSense::kLessEqual, 1.5);
  const StandardForm sf = standardize(p);
  const LpResult res = solve_lp(sf);
  ASSERT_EQ(res.basis.status[1], ColumnStatus::kAtUpper);
  Cut cut;
  cut.space = CutSpace::kNonbasic;
  cut.indices = {1};
  cut.coefficients = {-2};
  cut.rhs = -1;
  // -2 (1 - x2) <= -1  ->  2 x2 <= 1.
  const Cut s = to_structural_space(cut, sf, res);
  EXPECT_DOUBLE_EQ(s.coefficient(1), 2.0);
  EXPECT_DOUBLE_EQ(s.rhs, 1.0);
  EXPECT_NEAR(s.activity(res.structural()) - s.rhs, 1.0, 1e-12);
}

TEST(ElementarySplitTest, Examples) {
  SplitDisjunction s = elementary_split(3, 2.3);
  EXPECT_EQ(s.indices, std::vector<int>{3});
  EXPECT_EQ(s.coefficients, std::vector<std::int64_t>{1});
  EXPECT_EQ(s.rhs, 2);
  EXPECT_EQ(elementary_split(0, -0.5).rhs, -1);
  try {
    elementary_split(1, 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFractional);
  }
}

TEST(SplitOfGmiTest, Examples) {
  const SplitDisjunction s = split_of_gmi(make_row(0, 0.5, {{1, 1.5}}), {true, true});
  EXPECT_EQ(s.indices, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.coefficients, (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(s.rhs, 0);

  const SplitDisjunction c = split_of_gmi(make_row(0, 4.7, {{1, -2.5}}), {true, false});
  EXPECT_EQ(c.indices, std::vector<int>{0});
  EXPECT_EQ(c.rhs, 4);

  const SplitDisjunction up = split_of_gmi(make_row(0, 0.25, {{1, 0.75}}), {true, true});
  EXPECT_EQ(up.coefficient(1), 1);
  EXPECT_THROW(split_of_gmi(make_row(0, 1.0, {{1, 0.5}}), {true, true}), Error);
}

TEST(CheckCutValidityTest, WorkedRowGmiIsValid) {
  // x + 1.5 y <= 0.5 with x, y integer in [0, 3]; maximize x.
  Milp p;
  p.add_variable("x", -1, 0, 3, true);
  p.add_variable("y", 0, 0, 3, true);
  p.add_row("r", {1, 1.5}, RowSense::kLessEqual, 0.5);
  const StandardForm sf = standardize(p);
  const LpResult res = solve_lp(sf);
  ASSERT_TRUE(res.is_basic(0));
  const TableauRow row = tableau_row(res, 0);
  const Cut gmi = gmi_from_row(row, lp_integer_mask(res, sf));
  const Cut orig = to_original_space(to_structural_space(gmi, sf, res), sf);
  EXPECT_TRUE(check_cut_validity(p, orig));
  // It also cuts off the LP optimum.
  EXPECT_GT(efficacy(orig, sf.to_original(res.structural())), 0.0);
}

TEST(CheckCutValidityTest, InvalidCutDetected) {
  Milp p;
  p.add_variable("x1", 1, 0, 2, true);
  p.add_variable("x2", 1, 0, 2, true);
  p.add_row("r", {1, 1}, RowSense::kLessEqual, 3);
  Cut cut;  // x1 >= 1
  cut.space = CutSpace::kOriginal;
  cut.indices = {0};
  cut.coefficients = {-1};
  cut.rhs = -1;
  EXPECT_FALSE(check_cut_validity(p, cut));
}

TEST(CheckCutValidityTest, PureContinuousInstance) {
  Milp p;
  p.add_variable("x", 0, 0, 4, false);
  p.add_variable("y", 0, 0, 4, false);
  p.add_row("r", {1, 1}, RowSense::kLessEqual, 3);
  Cut ok;
  ok.space = CutSpace::kOriginal;
  ok.indices = {0, 1};
  ok.coefficients = {1, 1};
  ok.rhs = 3;
  EXPECT_TRUE(check_cut_validity(p, ok));
  ok.rhs = 2.9;
  EXPECT_FALSE(check_cut_validity(p, ok));
}

TEST(CheckCutValidityTest, TooLarge) {
  Milp p;
  p.add_variable("x", 0, 0, 1000, true);
  p.add_variable("y", 0, 0, 1000, true);
  p.add_variable("z", 0, 0, 1000, true);
  Cut c;
  c.space = CutSpace::kOriginal;
  c.indices = {0};
  c.coefficients = {1};
  c.rhs = 5000;
  try {
    check_cut_validity(p, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLargeToEnumerate);
  }
}

TEST(SeparateRoundTest, IntegralOptimumGivesNothing) {
  Milp p;
  p.add_variable("x", -1, 0, 3, true);
  p.add_row("r", {1}, RowSense::kLessEqual, 2);
  const StandardForm sf = standardize(p);
  EXPECT_TRUE(separate_round(sf, solve_lp(sf)).selected.empty());
}

TEST(SeparateRoundTest, TopNAndThreshold) {
  // Two independent fractional rows.
  Milp p;
  p.add_variable("x", -1, 0, 10, true);
  p.add_variable("y", -1, 0, 10, true);
  p.add_row("rx", {2, 0}, RowSense::kLessEqual, 3);
  p.add_row("ry", {0, 3}, RowSense::kLessEqual, 7);
  const StandardForm sf = standardize(p);
  const LpResult res = solve_lp(sf);
  CutSettings all;
  const SeparationRound both = separate_round(sf, res, all);
  ASSERT_EQ(both.generated.size(), 2u);
  CutSettings one;
  one.max_cuts_per_round = 1;
  const SeparationRound top = separate_round(sf, res, one);
  ASSERT_EQ(top.selected.size(), 1u);
  const double best = std::max(both.generated[0].efficacy, both.generated[1].efficacy);
  EXPECT_EQ(top.selected[0].efficacy, best);
  CutSettings strict;
  strict.efficacy_min = 1e6;
  EXPECT_TRUE(separate_round(sf, res, strict).selected.empty());
}

// Every fractional row of the root LP of the oracle tier: dominance, the
// 1/||gamma|| identity, strict strengthening, validity and split soundness.
TEST(CutgenPropertyTest, RootRowsOfOracleTier) {
  int rows_checked = 0;
  int strict_rows = 0;
  for (int index = 0; index < 45; ++index) {
    const Milp p = support::oracle_tier_instance(index);
    const StandardForm sf = standardize(p);
    const LpResult res = solve_lp(sf);
    ASSERT_EQ(res.status, LpStatus::kOptimal);
    const std::vector<bool> mask = lp_integer_mask(res, sf);
    const CutValidator validator(p);
    const oracle::MilpOptimum truth = oracle::brute_force(p);
    for (const FractionalBasic& fb : fractional_basics(res, sf)) {
      const TableauRow row = tableau_row(res, fb.column);
      const RowCut g = derive_row_cut(row, mask, CutKind::kGmi);
      const RowCut w = derive_row_cut(row, mask, CutKind::kWeakGmi);
      if (g.gate != RowGate::kAccepted || w.gate != RowGate::kAccepted) continue;
      ++rows_checked;
      bool expect_strict = false;
      bool strict = false;
      for (const TableauEntry& e : row.entries) {
        if (e.fixed) continue;
        const double gg = gamma_of(g.cut, e.column);
        const double gw = gamma_of(w.cut, e.column);
        EXPECT_GE(gg, 0.0);
        EXPECT_LE(gg, gw + 1e-9);
        if (!mask[e.column]) EXPECT_EQ(gg, gw);
        if (mask[e.column] && (e.coefficient >= 1.0 + 1e-9 || e.coefficient < -1.0 - 1e-9)) {
          expect_strict = true;
        }
        if (gg < gw - 1e-12) strict = true;
      }
      if (expect_strict) {
        EXPECT_TRUE(strict);
        ++strict_rows;
      }
      for (const Cut* c : {&g.cut, &w.cut}) {
        double sq = 0.0;
        for (double v : c->coefficients) sq += v * v;
        const std::vector<double> zero(res.lp->num_cols, 0.0);
        EXPECT_NEAR(efficacy(*c, zero), 1.0 / std::sqrt(sq), 1e-9);
        EXPECT_NEAR(nonbasic_efficacy(*c), 1.0 / std::sqrt(sq), 1e-9);
        EXPECT_GT(nonbasic_efficacy(*c), 0.0);
        const Cut structural = to_structural_space(*c, sf, res);
        EXPECT_NEAR(structural.activity(res.structural()) - structural.rhs, 1.0, 1e-7);
        EXPECT_TRUE(validator.is_valid(to_original_space(structural, sf))) << p.name;
      }
      EXPECT_GE(nonbasic_efficacy(g.cut), nonbasic_efficacy(w.cut) - 1e-9);

      const SplitDisjunction split = split_to_original(split_of_gmi(row, mask), sf, res);
      double lp_side = 0.0;
      const std::vector<double> x_lp = sf.to_original(res.structural());
      for (std::size_t k = 0; k < split.indices.size(); ++k) {
        EXPECT_TRUE(p.integer[split.indices[k]]);
        lp_side += split.coefficients[k] * x_lp[split.indices[k]];
      }
      // The LP point is strictly inside the strip; no feasible point is.
      EXPECT_GT(lp_side, split.rhs + 1e-7);
      EXPECT_LT(lp_side, split.rhs + 1 - 1e-7);
      for (const auto& x : truth.feasible_points) {
        double v = 0.0;
        for (std::size_t k = 0; k < split.indices.size(); ++k) {
          v += split.coefficients[k] * x[split.indices[k]];
        }
        EXPECT_TRUE(v <= split.rhs + 1e-9 || v >= split.rhs + 1 - 1e-9);
      }
    }
  }
  EXPECT_GT(rows_checked, 40);
  EXPECT_GT(strict_rows, 0);
}

TEST(RootCutLoopPropertyTest, CutsAreValidAndBoundMonotone) {
  for (int index = 0; index < 30; ++index) {
    const Milp p = support::oracle_tier_instance(index);
    const StandardForm sf = standardize(p);
    BranchHistory hist(p.num_vars(), 1);
    const RootCutResult rc = root_cut_loop(sf, solve_lp(sf), 5, hist, BranchingSettings{});
    for (std::size_t k = 1; k < rc.bound_history.size(); ++k) {
      EXPECT_GE(rc.bound_history[k], rc.bound_history[k - 1] - 1e-9);
    }
    const CutValidator validator(p);
    for (const Cut& c : rc.cuts) EXPECT_TRUE(validator.is_valid(to_original_space(c, sf)));
    const auto truth = oracle::brute_force(p);
    ASSERT_TRUE(truth.objective);
    EXPECT_LE(rc.lp.objective, *truth.objective + 1e-6);
  }
}

}  // namespace
}  // namespace splitbranch
