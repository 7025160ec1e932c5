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

#include "splitbranch/branching.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "splitbranch/error.hpp"

namespace splitbranch {

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::kRandom: return "random";
    case Rule::kFullStrong: return "fullstrong";
    case Rule::kPseudocost: return "pseudocost";
    case Rule::kGmi: return "gmi";
    case Rule::kWeakGmi: return "weakgmi";
    case Rule::kHybridGmi: return "hybridgmi";
  }
  return "unknown";
}

Rule parse_rule(std::string_view name) {
  for (Rule r : {Rule::kRandom, Rule::kFullStrong, Rule::kPseudocost, Rule::kGmi,
                 Rule::kWeakGmi, Rule::kHybridGmi}) {
    if (to_string(r) == name) return r;
  }
  throw Error(ErrorCode::kInvalidParams,
              "unknown branching rule '" + std::string(name) + "'");
}

BranchHistory::BranchHistory(int num_vars, std::uint64_t seed)
    : pseudocosts_(num_vars),
      last_gmi_(num_vars),
      gmi_sum_(num_vars, 0.0),
      gmi_count_(num_vars, 0),
      rng_(seed) {}

double BranchHistory::unit_gain(int j, Direction dir) const {
  const PseudocostRecord& rec = pseudocosts_[j];
  if (dir == Direction::kDown && rec.down_count > 0) return rec.down_sum / rec.down_count;
  if (dir == Direction::kUp && rec.up_count > 0) return rec.up_sum / rec.up_count;
  double sum = 0.0;
  int count = 0;
  for (const PseudocostRecord& r : pseudocosts_) {
    if (dir == Direction::kDown && r.down_count > 0) {
      sum += r.down_sum / r.down_count;
      ++count;
    } else if (dir == Direction::kUp && r.up_count > 0) {
      sum += r.up_sum / r.up_count;
      ++count;
    }
  }
  return count > 0 ? sum / count : 1.0;
}

void BranchHistory::set_gmi_efficacy(int j, double normalized, bool average) {
  gmi_sum_[j] += normalized;
  ++gmi_count_[j];
  last_gmi_[j] = average ? gmi_sum_[j] / gmi_count_[j] : normalized;
}

int select_best(std::span<const CandidateScore> scores) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(scores.size()); ++k) {
    if (best < 0 || scores[k].score > scores[best].score ||
        (scores[k].score == scores[best].score &&
         scores[k].variable < scores[best].variable)) {
      best = k;
    }
  }
  return best;
}

double original_value(const LpResult& res, const StandardForm& sf, int var) {
  const ColumnOrigin& o = sf.var_map[var];
  return o.kind == ColumnOrigin::Kind::kShifted ? o.offset + res.values[var]
                                                : o.offset - res.values[var];
}

std::vector<int> enumerate_candidates(const LpResult& res, const StandardForm& sf,
                                      double int_tol) {
  std::vector<int> out;
  for (int j = 0; j < sf.num_structural; ++j) {
    if (!sf.integer[j]) continue;
    const double v = original_value(res, sf, j);
    if (std::abs(v - std::round(v)) >= int_tol) out.push_back(j);
  }
  return out;
}

std::vector<CandidateScore> score_by_cut(CutKind kind,
                                         std::span<const int> candidates,
                                         const LpResult& res,
                                         const StandardForm& sf,
                                         const BranchingSettings& settings,
                                         const CutObserver* observer) {
  const std::vector<bool> mask = lp_integer_mask(res, sf);
  std::vector<CandidateScore> scores;
  scores.reserve(candidates.size());
  for (int j : candidates) {
    CandidateScore s;
    s.variable = j;
    if (res.is_basic(j)) {
      const TableauRow row = tableau_row(res, j);
      RowCut rc = derive_row_cut(row, mask, kind, settings.cut);
      if (rc.gate == RowGate::kAccepted) {
        const Cut structural = to_structural_space(rc.cut, sf, res);
        if (!structural.indices.empty()) {
          if (observer) (*observer)(CutEvent{row, rc.cut, structural, res});
          s.base = std::max(0.0, score_cut(rc.cut, structural, res, settings.cut));
        }
      }
    }
    s.score = s.base;
    scores.push_back(s);
  }
  return scores;
}

double product_score(double down, double up, double epsilon) {
  return std::max(down, epsilon) * std::max(up, epsilon);
}

namespace {

ChildGains strong_branch(int j, const NodeContext& ctx,
                         const BranchingSettings& settings) {
  const double v = original_value(ctx.lp, ctx.sf, j);
  ChildGains g;
  std::vector<double> lower(ctx.lower.begin(), ctx.lower.end());
  std::vector<double> upper(ctx.upper.begin(), ctx.upper.end());
  for (Direction dir : {Direction::kDown, Direction::kUp}) {
    const double saved_lo = lower[j];
    const double saved_hi = upper[j];
    if (dir == Direction::kDown) {
      upper[j] = std::floor(v);
    } else {
      lower[j] = std::ceil(v);
    }
    const ColumnBounds bounds = ctx.sf.column_bounds(lower, upper);
    const LpResult child =
        solve_lp(ctx.sf, ctx.cuts, &bounds, &ctx.lp.basis, ctx.limits);
    if (ctx.lp_iterations) *ctx.lp_iterations += child.iterations;
    double gain = 0.0;
    bool infeasible = false;
    if (child.status == LpStatus::kInfeasible) {
      infeasible = true;
      gain = settings.infeasible_gain;
    } else if (child.status == LpStatus::kOptimal) {
      gain = std::max(0.0, child.objective - ctx.lp.objective);
    }
    if (dir == Direction::kDown) {
      g.down = gain;
      g.down_infeasible = infeasible;
    } else {
      g.up = gain;
      g.up_infeasible = infeasible;
    }
    lower[j] = saved_lo;
    upper[j] = saved_hi;
  }
  return g;
}

}  // namespace

StrongBranchResult score_fullstrong(std::span<const int> candidates,
                                    const NodeContext& ctx,
                                    const BranchingSettings& settings) {
  StrongBranchResult result;
  for (int j : candidates) {
    const ChildGains g = strong_branch(j, ctx, settings);
    CandidateScore s;
    s.variable = j;
    s.base = product_score(g.down, g.up, settings.epsilon);
    s.score = s.base;
    result.scores.push_back(s);
    result.gains.push_back(g);
    if (g.down_infeasible && g.up_infeasible) result.prunable = true;
  }
  return result;
}

std::vector<CandidateScore> score_pseudocost(std::span<const int> candidates,
                                             BranchHistory& hist,
                                             const NodeContext& ctx,
                                             const BranchingSettings& settings,
                                             bool* prunable) {
  std::vector<CandidateScore> scores;
  for (int j : candidates) {
    const double v = original_value(ctx.lp, ctx.sf, j);
    const double f = v - std::floor(v);
    PseudocostRecord& rec = hist.pseudocost(j);
    CandidateScore s;
    s.variable = j;
    if (std::min(rec.down_count, rec.up_count) < settings.reliability) {
      const ChildGains g = strong_branch(j, ctx, settings);
      ++rec.strong_inits;
      if (!g.down_infeasible) update_pseudocost(hist, j, Direction::kDown, f, g.down);
      if (!g.up_infeasible) update_pseudocost(hist, j, Direction::kUp, f, g.up);
      if (g.down_infeasible && g.up_infeasible && prunable) *prunable = true;
      s.base = product_score(g.down, g.up, settings.epsilon);
    } else {
      s.base = product_score(hist.unit_gain(j, Direction::kDown) * f,
                             hist.unit_gain(j, Direction::kUp) * (1.0 - f),
                             settings.epsilon);
    }
    s.score = s.base;
    scores.push_back(s);
  }
  return scores;
}

CandidateScore score_random(std::span<const int> candidates, BranchHistory& hist) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInvalidParams, "random rule needs a candidate");
  }
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  CandidateScore s;
  s.variable = candidates[pick(hist.rng())];
  s.score = s.base = 1.0;
  return s;
}

void record_gmi_history(BranchHistory& hist, std::span<const ScoredCut> round,
                        double eps, bool average) {
  double max_raw = 0.0;
  for (const ScoredCut& c : round) max_raw = std::max(max_raw, c.efficacy);
  if (max_raw <= 0.0) return;
  for (const ScoredCut& c : round) {
    if (c.efficacy > eps && c.variable >= 0 && c.variable < hist.num_vars()) {
      hist.set_gmi_efficacy(c.variable, c.efficacy / max_raw, average);
    }
  }
}

std::vector<CandidateScore> combine_hybrid_gmi(std::span<const CandidateScore> base,
                                               const BranchHistory& hist,
                                               double weight) {
  std::vector<CandidateScore> out(base.begin(), base.end());
  for (CandidateScore& s : out) {
    const double g = hist.last_gmi_efficacy(s.variable).value_or(0.0);
    s.gmi_term = weight * g;
    s.score = s.base + s.gmi_term;
  }
  return out;
}

void update_pseudocost(BranchHistory& hist, int var, Direction dir,
                       double fraction, double delta) {
  PseudocostRecord& rec = hist.pseudocost(var);
  const double gain = std::max(0.0, delta);
  if (dir == Direction::kDown) {
    rec.down_sum += gain / fraction;
    ++rec.down_count;
  } else {
    rec.up_sum += gain / (1.0 - fraction);
    ++rec.up_count;
  }
}

}  // namespace splitbranch
