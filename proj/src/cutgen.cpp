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

#include "splitbranch/cutgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "splitbranch/error.hpp"

namespace splitbranch {
namespace {

double frac(double v) { return v - std::floor(v); }

bool rhs_gated(double f0, const CutSettings& settings) {
  return !(f0 >= settings.f0_min && f0 <= 1.0 - settings.f0_min);
}

// Sparse accumulator over a dense index range.
class DenseRow {
 public:
  explicit DenseRow(int size) : values_(size, 0.0) {}
  void add(int index, double value) { values_[index] += value; }
  Cut to_cut(double rhs, CutSpace space, double zero_tol) const {
    Cut cut;
    cut.rhs = rhs;
    cut.space = space;
    for (int i = 0; i < static_cast<int>(values_.size()); ++i) {
      if (std::abs(values_[i]) >= zero_tol) {
        cut.indices.push_back(i);
        cut.coefficients.push_back(values_[i]);
      }
    }
    return cut;
  }

 private:
  std::vector<double> values_;
};

}  // namespace

RowCut derive_row_cut(const TableauRow& row, const std::vector<bool>& int_mask,
                      CutKind kind, const CutSettings& settings) {
  RowCut out;
  const double f0 = frac(row.rhs);
  if (rhs_gated(f0, settings)) {
    out.gate = RowGate::kRhsTooIntegral;
    return out;
  }
  Cut& cut = out.cut;
  cut.kind = kind;
  cut.space = CutSpace::kNonbasic;
  cut.source_column = row.basic_column;
  cut.rhs = -1.0;
  double max_abs = 0.0;
  double min_abs = kInfinity;
  for (const TableauEntry& e : row.entries) {
    if (e.fixed) continue;
    const double a = e.coefficient;
    double gamma;
    if (kind == CutKind::kGmi && int_mask[e.column]) {
      const double fi = frac(a);
      gamma = fi <= f0 ? fi / f0 : (1.0 - fi) / (1.0 - f0);
    } else {
      gamma = a >= 0.0 ? a / f0 : -a / (1.0 - f0);
    }
    if (std::abs(gamma) < settings.zero_tol) continue;
    cut.indices.push_back(e.column);
    cut.coefficients.push_back(-gamma);
    max_abs = std::max(max_abs, std::abs(gamma));
    min_abs = std::min(min_abs, std::abs(gamma));
  }
  if (cut.indices.empty() || max_abs > settings.max_dynamism * min_abs) {
    out.gate = RowGate::kNumericallyUnsafe;
  }
  return out;
}

namespace {

Cut accepted_or_throw(RowCut rc) {
  switch (rc.gate) {
    case RowGate::kAccepted:
      return std::move(rc.cut);
    case RowGate::kRhsTooIntegral:
      throw Error(ErrorCode::kRhsTooIntegral,
                  "tableau row right-hand side is too close to an integer");
    case RowGate::kNumericallyUnsafe:
      break;
  }
  throw Error(ErrorCode::kNumericallyUnsafe,
              "cut coefficients are empty or too badly scaled");
}

}  // namespace

Cut gmi_from_row(const TableauRow& row, const std::vector<bool>& int_mask,
                 const CutSettings& settings) {
  return accepted_or_throw(derive_row_cut(row, int_mask, CutKind::kGmi, settings));
}

Cut weak_gmi_from_row(const TableauRow& row, const CutSettings& settings) {
  static const std::vector<bool> kNoMask;
  return accepted_or_throw(
      derive_row_cut(row, kNoMask, CutKind::kWeakGmi, settings));
}

double efficacy(const Cut& cut, std::span<const double> x) {
  const double norm = cut.norm();
  if (norm <= 0.0) throw Error(ErrorCode::kZeroNorm, "cut has no coefficients");
  return (cut.activity(x) - cut.rhs) / norm;
}

double nonbasic_efficacy(const Cut& cut) {
  const double norm = cut.norm();
  if (norm <= 0.0) throw Error(ErrorCode::kZeroNorm, "cut has no coefficients");
  return -cut.rhs / norm;
}

Cut to_structural_space(const Cut& cut, const StandardForm& sf,
                        const LpResult& res) {
  const LpData& lp = *res.lp;
  std::vector<double> alpha(lp.num_cols, 0.0);
  double rhs = cut.rhs;
  if (cut.space == CutSpace::kNonbasic) {
    for (std::size_t k = 0; k < cut.indices.size(); ++k) {
      const int j = cut.indices[k];
      const double a = cut.coefficients[k];
      if (res.basis.status[j] == ColumnStatus::kAtUpper) {
        alpha[j] -= a;  // a * (u - x)
        rhs -= a * lp.upper[j];
      } else {
        alpha[j] += a;  // a * (x - l)
        rhs += a * lp.lower[j];
      }
    }
  } else {
    for (std::size_t k = 0; k < cut.indices.size(); ++k) {
      alpha[cut.indices[k]] += cut.coefficients[k];
    }
  }
  // Substitute s = b_r - A_r,struct . y for every slack-like column.
  for (int j = lp.num_structural; j < lp.num_cols; ++j) {
    const double a = alpha[j];
    if (a == 0.0) continue;
    alpha[j] = 0.0;
    if (lp.role[j] == ColumnRole::kArtificial) continue;  // fixed at 0
    const int r = lp.row_of_column[j];
    rhs -= a * lp.b(r);
    for (int i = 0; i < lp.num_structural; ++i) alpha[i] -= a * lp.a(r, i);
  }
  DenseRow dense(sf.num_structural);
  for (int i = 0; i < sf.num_structural; ++i) dense.add(i, alpha[i]);
  Cut out = dense.to_cut(rhs, CutSpace::kStandard, 1e-12);
  out.kind = cut.kind;
  out.source_column = cut.source_column;
  return out;
}

Cut to_original_space(const Cut& cut, const StandardForm& sf) {
  if (cut.space != CutSpace::kStandard) {
    throw Error(ErrorCode::kInvalidParams, "expected a standard-space cut");
  }
  Cut out;
  out.space = CutSpace::kOriginal;
  out.kind = cut.kind;
  out.source_column = cut.source_column;
  out.rhs = cut.rhs;
  for (std::size_t k = 0; k < cut.indices.size(); ++k) {
    const ColumnOrigin& o = sf.var_map[cut.indices[k]];
    const double a = cut.coefficients[k];
    if (o.kind == ColumnOrigin::Kind::kShifted) {
      out.indices.push_back(o.index);  // a * (x - off)
      out.coefficients.push_back(a);
      out.rhs += a * o.offset;
    } else {
      out.indices.push_back(o.index);  // a * (off - x)
      out.coefficients.push_back(-a);
      out.rhs -= a * o.offset;
    }
  }
  return out;
}

SplitDisjunction elementary_split(int j, double lp_value, double int_tol) {
  if (std::abs(lp_value - std::round(lp_value)) <= int_tol) {
    throw Error(ErrorCode::kNotFractional,
                "value " + std::to_string(lp_value) + " is integral");
  }
  SplitDisjunction split;
  split.indices = {j};
  split.coefficients = {1};
  split.rhs = static_cast<std::int64_t>(std::floor(lp_value));
  split.space = CutSpace::kOriginal;
  return split;
}

SplitDisjunction split_of_gmi(const TableauRow& row,
                              const std::vector<bool>& int_mask,
                              const CutSettings& settings) {
  const double f0 = frac(row.rhs);
  if (rhs_gated(f0, settings)) {
    throw Error(ErrorCode::kRhsTooIntegral,
                "tableau row right-hand side is too close to an integer");
  }
  SplitDisjunction split;
  split.space = CutSpace::kNonbasic;
  split.rhs = static_cast<std::int64_t>(std::floor(row.rhs));
  std::vector<std::pair<int, std::int64_t>> terms{{row.basic_column, 1}};
  for (const TableauEntry& e : row.entries) {
    if (!int_mask[e.column]) continue;
    const double a = e.coefficient;
    const double rounded = frac(a) <= f0 ? std::floor(a) : std::ceil(a);
    const auto pi = static_cast<std::int64_t>(rounded);
    if (pi != 0) terms.emplace_back(e.column, pi);
  }
  std::sort(terms.begin(), terms.end());
  for (const auto& [index, pi] : terms) {
    split.indices.push_back(index);
    split.coefficients.push_back(pi);
  }
  return split;
}

SplitDisjunction split_to_original(const SplitDisjunction& split,
                                   const StandardForm& sf, const LpResult& res) {
  const LpData& lp = *res.lp;
  std::vector<std::int64_t> pi(sf.num_structural, 0);
  std::int64_t rhs = split.rhs;
  for (std::size_t k = 0; k < split.indices.size(); ++k) {
    const int j = split.indices[k];
    const std::int64_t c = split.coefficients[k];
    if (j >= sf.num_structural || !sf.integer[j]) {
      throw Error(ErrorCode::kInvalidParams,
                  "split has support outside the integer columns");
    }
    if (split.space == CutSpace::kNonbasic && !res.is_basic(j)) {
      if (res.basis.status[j] == ColumnStatus::kAtUpper) {
        // c * (u - x): the strip shifts by c*u.
        pi[j] -= c;
        rhs -= c * std::llround(lp.upper[j]);
      } else {
        pi[j] += c;
        rhs += c * std::llround(lp.lower[j]);
      }
    } else {
      pi[j] += c;
    }
  }
  SplitDisjunction out;
  out.space = CutSpace::kOriginal;
  std::vector<std::pair<int, std::int64_t>> terms;
  for (int j = 0; j < sf.num_structural; ++j) {
    if (pi[j] == 0) continue;
    const ColumnOrigin& o = sf.var_map[j];
    const std::int64_t off = std::llround(o.offset);
    if (o.kind == ColumnOrigin::Kind::kShifted) {
      terms.emplace_back(o.index, pi[j]);
      rhs += pi[j] * off;
    } else {
      terms.emplace_back(o.index, -pi[j]);
      rhs -= pi[j] * off;
    }
  }
  std::sort(terms.begin(), terms.end());
  for (const auto& [index, c] : terms) {
    out.indices.push_back(index);
    out.coefficients.push_back(c);
  }
  out.rhs = rhs;
  return out;
}

CutValidator::CutValidator(const Milp& p, double max_assignments) : p_(p) {
  p_.validate();
  for (int i = 0; i < p_.num_vars(); ++i) {
    (p_.integer[i] ? int_idx_ : cont_idx_).push_back(i);
  }
  double grid = 1.0;
  std::vector<double> lo(int_idx_.size());
  std::vector<double> hi(int_idx_.size());
  for (std::size_t k = 0; k < int_idx_.size(); ++k) {
    const int i = int_idx_[k];
    lo[k] = std::ceil(p_.lower[i] - 1e-9);
    hi[k] = std::floor(p_.upper[i] + 1e-9);
    if (!std::isfinite(lo[k]) || !std::isfinite(hi[k])) {
      throw Error(ErrorCode::kTooLargeToEnumerate,
                  "integer variable " + p_.var_names[i] + " is unbounded");
    }
    grid *= std::max(0.0, hi[k] - lo[k] + 1.0);
  }
  if (grid > max_assignments) {
    throw Error(ErrorCode::kTooLargeToEnumerate,
                "integer grid has " + std::to_string(grid) + " points");
  }
  if (grid == 0.0) return;

  // Continuous slice template: continuous columns, all rows.
  Milp slice;
  slice.name = p_.name + "_slice";
  for (int i : cont_idx_) {
    slice.add_variable(p_.var_names[i], 0.0, p_.lower[i], p_.upper[i], false);
  }
  std::vector<double> z(lo);
  while (true) {
    bool feasible = true;
    Milp current = slice;
    for (const Row& row : p_.rows) {
      double int_part = 0.0;
      for (std::size_t k = 0; k < int_idx_.size(); ++k) {
        int_part += row.coefficients[int_idx_[k]] * z[k];
      }
      std::vector<double> coeffs;
      bool has_continuous = false;
      for (int i : cont_idx_) {
        coeffs.push_back(row.coefficients[i]);
        if (row.coefficients[i] != 0.0) has_continuous = true;
      }
      const double rest = row.rhs - int_part;
      if (!has_continuous) {
        const double tol = 1e-9 * std::max(1.0, std::abs(row.rhs));
        const bool ok =
            row.sense == RowSense::kLessEqual      ? rest >= -tol
            : row.sense == RowSense::kGreaterEqual ? rest <= tol
                                                   : std::abs(rest) <= tol;
        if (!ok) {
          feasible = false;
          break;
        }
        continue;
      }
      current.add_row(row.name, std::move(coeffs), row.sense, rest);
    }
    if (feasible && !cont_idx_.empty()) {
      StandardForm sf = standardize(current);
      const LpResult res = solve_lp(sf);
      feasible = res.status == LpStatus::kOptimal;
      if (feasible) slices_.push_back(std::move(sf));
    }
    if (feasible) assignments_.push_back(z);

    std::size_t k = 0;
    for (; k < z.size(); ++k) {
      if (z[k] < hi[k]) {
        z[k] += 1.0;
        break;
      }
      z[k] = lo[k];
    }
    if (k == z.size()) break;
  }
}

bool CutValidator::is_valid(const Cut& cut, double tol,
                            const std::vector<double>* lower,
                            const std::vector<double>* upper) const {
  if (cut.space != CutSpace::kOriginal) {
    throw Error(ErrorCode::kInvalidParams, "validity needs an original-space cut");
  }
  std::vector<double> alpha(p_.num_vars(), 0.0);
  for (std::size_t k = 0; k < cut.indices.size(); ++k) {
    alpha[cut.indices[k]] += cut.coefficients[k];
  }
  const std::vector<double>& lo = lower ? *lower : p_.lower;
  const std::vector<double>& hi = upper ? *upper : p_.upper;

  bool continuous_bounds_changed = false;
  std::vector<double> cont_lo;
  std::vector<double> cont_hi;
  for (int i : cont_idx_) {
    cont_lo.push_back(lo[i]);
    cont_hi.push_back(hi[i]);
    if (lo[i] != p_.lower[i] || hi[i] != p_.upper[i]) continuous_bounds_changed = true;
  }

  for (std::size_t a = 0; a < assignments_.size(); ++a) {
    const std::vector<double>& z = assignments_[a];
    bool inside = true;
    double value = 0.0;
    for (std::size_t k = 0; k < int_idx_.size(); ++k) {
      const int i = int_idx_[k];
      if (z[k] < lo[i] - 1e-9 || z[k] > hi[i] + 1e-9) {
        inside = false;
        break;
      }
      value += alpha[i] * z[k];
    }
    if (!inside) continue;
    if (!cont_idx_.empty()) {
      StandardForm sf = slices_[a];
      for (int c = 0; c < sf.num_structural; ++c) {
        const ColumnOrigin& o = sf.var_map[c];
        const double obj = -alpha[cont_idx_[o.index]];
        sf.cost[c] = o.kind == ColumnOrigin::Kind::kShifted ? obj : -obj;
      }
      ColumnBounds bounds;
      if (continuous_bounds_changed) bounds = sf.column_bounds(cont_lo, cont_hi);
      const LpResult res =
          solve_lp(sf, {}, continuous_bounds_changed ? &bounds : nullptr);
      if (res.status == LpStatus::kUnbounded) return false;
      if (res.status != LpStatus::kOptimal) continue;
      const std::vector<double> xc = sf.to_original(res.structural());
      for (std::size_t k = 0; k < cont_idx_.size(); ++k) {
        value += alpha[cont_idx_[k]] * xc[k];
      }
    }
    if (value > cut.rhs + tol) return false;
  }
  return true;
}

bool check_cut_validity(const Milp& p, const Cut& cut, double tol,
                        const std::vector<double>* lower,
                        const std::vector<double>* upper,
                        double max_assignments) {
  if (lower == nullptr && upper == nullptr) {
    return CutValidator(p, max_assignments).is_valid(cut, tol);
  }
  Milp q = p;
  if (lower) q.lower = *lower;
  if (upper) q.upper = *upper;
  return CutValidator(q, max_assignments).is_valid(cut, tol);
}

double score_cut(const Cut& nonbasic, const Cut& structural,
                 const LpResult& res, const CutSettings& settings) {
  if (settings.score_in_nonbasic_space) return nonbasic_efficacy(nonbasic);
  return efficacy(structural, res.structural());
}

SeparationRound separate_round(const StandardForm& sf, const LpResult& res,
                               const CutSettings& settings,
                               const CutObserver* observer) {
  SeparationRound round;
  if (res.status != LpStatus::kOptimal) return round;
  const std::vector<bool> mask = lp_integer_mask(res, sf);
  for (const FractionalBasic& fb : fractional_basics(res, sf, settings.int_tol)) {
    if (!res.is_basic(fb.column)) continue;
    const TableauRow row = tableau_row(res, fb.column);
    RowCut rc = derive_row_cut(row, mask, CutKind::kGmi, settings);
    if (rc.gate != RowGate::kAccepted) continue;
    Cut structural = to_structural_space(rc.cut, sf, res);
    if (structural.indices.empty()) continue;
    if (observer) (*observer)(CutEvent{row, rc.cut, structural, res});
    const double eff = score_cut(rc.cut, structural, res, settings);
    round.generated.push_back(ScoredCut{std::move(structural), eff, fb.column});
  }
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < round.generated.size(); ++k) {
    if (round.generated[k].efficacy >= settings.efficacy_min) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ScoredCut& ca = round.generated[a];
    const ScoredCut& cb = round.generated[b];
    if (ca.efficacy != cb.efficacy) return ca.efficacy > cb.efficacy;
    return ca.variable < cb.variable;
  });
  const std::size_t keep =
      std::min<std::size_t>(order.size(), std::max(0, settings.max_cuts_per_round));
  for (std::size_t k = 0; k < keep; ++k) round.selected.push_back(round.generated[order[k]]);
  return round;
}

}  // namespace splitbranch
