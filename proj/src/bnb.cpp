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

#include "splitbranch/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <string>

#include "splitbranch/error.hpp"

namespace splitbranch {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct OpenNode {
  double key_bound;
  std::int64_t id;
  int depth;
  std::size_t slot;
};

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kTimeLimit: return "time_limit";
    case SolveStatus::kNodeLimit: return "node_limit";
    case SolveStatus::kError: return "error";
  }
  return "unknown";
}

std::pair<Node, Node> branch(const Node& node, int var, double lp_value,
                             std::int64_t first_id, double int_tol) {
  if (std::abs(lp_value - std::round(lp_value)) < int_tol) {
    throw Error(ErrorCode::kNotFractional,
                "cannot branch on integral value " + std::to_string(lp_value));
  }
  const double f = lp_value - std::floor(lp_value);
  Node down = node;
  down.id = first_id;
  down.parent = node.id;
  down.depth = node.depth + 1;
  down.upper[var] = std::floor(lp_value);
  down.branch_var = var;
  down.branch_dir = Direction::kDown;
  down.branch_fraction = f;
  Node up = down;
  up.id = first_id + 1;
  up.upper[var] = node.upper[var];
  up.lower[var] = std::ceil(lp_value);
  up.branch_dir = Direction::kUp;
  return {std::move(down), std::move(up)};
}

RootCutResult root_cut_loop(const StandardForm& sf, LpResult root, int rounds,
                            BranchHistory& hist, const BranchingSettings& settings,
                            const LpLimits& limits, const CutObserver* observer,
                            const ColumnBounds* bounds) {
  RootCutResult result;
  result.lp = std::move(root);
  if (result.lp.status != LpStatus::kOptimal) return result;
  result.bound_history.push_back(result.lp.objective);
  for (int round = 0; round < rounds; ++round) {
    const SeparationRound sep = separate_round(sf, result.lp, settings.cut, observer);
    record_gmi_history(hist, sep.generated, settings.gmi_record_eps,
                       settings.gmi_average);
    if (sep.selected.empty()) break;
    for (const ScoredCut& sc : sep.selected) result.cuts.push_back(sc.cut);
    LpResult next = solve_lp(sf, result.cuts, bounds, &result.lp.basis, limits);
    next.iterations += result.lp.iterations;
    if (next.status != LpStatus::kOptimal) {
      result.lp = std::move(next);
      break;
    }
    // Adding rows can only raise the minimum; clamp round-off.
    const double previous = result.lp.objective;
    if (next.objective < previous) next.objective = previous;
    result.lp = std::move(next);
    result.bound_history.push_back(result.lp.objective);
    if (result.lp.objective - previous < 1e-9) break;
  }
  return result;
}

SolveOutput solve(const Milp& p, const SolveSettings& settings) {
  const Clock::time_point start = Clock::now();
  SolveOutput out;
  SolveStats& stats = out.stats;
  auto finish = [&](SolveStatus status) {
    stats.status = status;
    stats.total_time = seconds_since(start);
    stats.branch_time = std::min(stats.branch_time, stats.total_time);
    if (std::isfinite(stats.incumbent) && std::isfinite(stats.bound)) {
      stats.gap = (stats.incumbent - stats.bound) /
                  std::max(std::abs(stats.incumbent), 1e-10);
    } else if (status == SolveStatus::kOptimal) {
      stats.gap = 0.0;
    }
    out.solution.objective = stats.incumbent;
    switch (status) {
      case SolveStatus::kOptimal:
        out.solution.status = SolutionStatus::kOptimal;
        break;
      case SolveStatus::kInfeasible:
        out.solution.status = SolutionStatus::kInfeasible;
        break;
      case SolveStatus::kUnbounded:
        out.solution.status = SolutionStatus::kUnbounded;
        out.solution.objective = -kInfinity;
        break;
      default:
        out.solution.status = std::isfinite(stats.incumbent) ? SolutionStatus::kFeasible
                                                             : SolutionStatus::kLimit;
        break;
    }
    return out;
  };

  StandardForm sf;
  try {
    sf = standardize(p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInconsistentBounds) return finish(SolveStatus::kInfeasible);
    throw;
  }
  const int n = p.num_vars();
  BranchHistory hist(n, settings.seed);
  const BranchingSettings& bs = settings.branching;

  if (settings.provided_objective) stats.incumbent = *settings.provided_objective;
  std::vector<double> incumbent_x;

  Node root;
  root.lower = p.lower;
  root.upper = p.upper;
  for (int i = 0; i < n; ++i) {
    if (!p.integer[i]) continue;
    root.lower[i] = std::ceil(root.lower[i] - 1e-9);
    root.upper[i] = std::floor(root.upper[i] + 1e-9);
  }

  // Root LP and cut rounds.
  LpResult root_lp = solve_lp(sf, {}, nullptr, nullptr, settings.lp);
  stats.lp_iterations += root_lp.iterations;
  if (root_lp.status == LpStatus::kInfeasible) return finish(SolveStatus::kInfeasible);
  if (root_lp.status == LpStatus::kUnbounded) return finish(SolveStatus::kUnbounded);
  if (root_lp.status == LpStatus::kIterationLimit) {
    throw Error(ErrorCode::kNumericalFailure, "root LP hit the iteration limit");
  }

  std::vector<double> cur_lower;
  std::vector<double> cur_upper;
  CutObserver cut_observer;
  const CutObserver* cut_observer_ptr = nullptr;
  if (settings.observer && settings.observer->on_cut) {
    cut_observer = [&](const CutEvent& ev) {
      settings.observer->on_cut(ev, cur_lower, cur_upper);
    };
    cut_observer_ptr = &cut_observer;
  }
  cur_lower = root.lower;
  cur_upper = root.upper;

  std::vector<Cut> cuts;
  if (settings.root_cut_rounds > 0) {
    const std::int64_t before = root_lp.iterations;
    RootCutResult rc = root_cut_loop(sf, std::move(root_lp), settings.root_cut_rounds,
                                     hist, bs, settings.lp, cut_observer_ptr);
    stats.lp_iterations += rc.lp.iterations - before;
    root_lp = std::move(rc.lp);
    cuts = std::move(rc.cuts);
    stats.cuts_added = static_cast<int>(cuts.size());
    if (root_lp.status == LpStatus::kInfeasible) return finish(SolveStatus::kInfeasible);
    if (root_lp.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumericalFailure, "root LP failed after adding cuts");
    }
  }

  // Open nodes live in `pool`; the heap orders slots.
  std::vector<Node> pool;
  std::vector<std::size_t> free_slots;
  const bool best_bound = settings.node_selection == NodeSelection::kBestBound;
  auto worse = [best_bound](const OpenNode& a, const OpenNode& b) {
    if (best_bound) {
      if (a.key_bound != b.key_bound) return a.key_bound > b.key_bound;
      return a.id > b.id;
    }
    return a.id < b.id;  // newest first
  };
  std::priority_queue<OpenNode, std::vector<OpenNode>, decltype(worse)> open(worse);
  auto push = [&](Node node) {
    std::size_t slot;
    if (!free_slots.empty()) {
      slot = free_slots.back();
      free_slots.pop_back();
      pool[slot] = std::move(node);
    } else {
      slot = pool.size();
      pool.push_back(std::move(node));
    }
    const Node& stored = pool[slot];
    open.push(OpenNode{stored.lower_bound, stored.id, stored.depth, slot});
  };

  root.lower_bound = root_lp.objective;
  push(std::move(root));
  std::int64_t next_id = 1;
  bool root_pending = true;
  SolveStatus limit_status = SolveStatus::kOptimal;

  while (!open.empty()) {
    if (stats.nodes >= settings.node_limit) {
      limit_status = SolveStatus::kNodeLimit;
      break;
    }
    if (seconds_since(start) > settings.time_limit) {
      limit_status = SolveStatus::kTimeLimit;
      break;
    }
    const OpenNode top = open.top();
    open.pop();
    Node node = std::move(pool[top.slot]);
    free_slots.push_back(top.slot);
    if (node.lower_bound >= stats.incumbent - settings.prune_tol) continue;

    LpResult lp;
    if (root_pending) {
      lp = std::move(root_lp);
      root_pending = false;
    } else {
      const ColumnBounds bounds = sf.column_bounds(node.lower, node.upper);
      lp = solve_lp(sf, cuts, &bounds, node.warm_start.get(), settings.lp);
      stats.lp_iterations += lp.iterations;
    }
    ++stats.nodes;
    if (lp.status == LpStatus::kInfeasible) continue;
    if (lp.status != LpStatus::kOptimal) {
      throw Error(ErrorCode::kNumericalFailure,
                  "node LP ended with status " + std::string(to_string(lp.status)));
    }
    if (node.branch_var >= 0) {
      update_pseudocost(hist, node.branch_var, node.branch_dir, node.branch_fraction,
                        lp.objective - node.lower_bound);
    }
    if (lp.objective < node.lower_bound) lp.objective = node.lower_bound;
    if (settings.observer && settings.observer->on_node) {
      settings.observer->on_node(node, lp);
    }
    if (lp.objective >= stats.incumbent - settings.prune_tol) continue;

    const std::vector<int> candidates =
        enumerate_candidates(lp, sf, settings.tol.integrality);
    if (candidates.empty()) {
      incumbent_x = sf.to_original(lp.structural());
      for (int i = 0; i < n; ++i) {
        if (p.integer[i]) incumbent_x[i] = std::round(incumbent_x[i]);
      }
      stats.incumbent = lp.objective;
      continue;
    }

    cur_lower = node.lower;
    cur_upper = node.upper;
    const Clock::time_point branch_start = Clock::now();
    NodeContext ctx{sf, cuts, node.lower, node.upper, lp, settings.lp,
                    &stats.lp_iterations};
    int chosen = -1;
    bool prunable = false;
    switch (settings.rule) {
      case Rule::kRandom:
        chosen = score_random(candidates, hist).variable;
        break;
      case Rule::kGmi:
      case Rule::kWeakGmi: {
        const auto scores = score_by_cut(
            settings.rule == Rule::kGmi ? CutKind::kGmi : CutKind::kWeakGmi,
            candidates, lp, sf, bs, cut_observer_ptr);
        chosen = scores[select_best(scores)].variable;
        break;
      }
      case Rule::kFullStrong: {
        const StrongBranchResult sb = score_fullstrong(candidates, ctx, bs);
        prunable = sb.prunable;
        chosen = sb.scores[select_best(sb.scores)].variable;
        break;
      }
      case Rule::kPseudocost:
      case Rule::kHybridGmi: {
        auto scores = score_pseudocost(candidates, hist, ctx, bs, &prunable);
        if (settings.rule == Rule::kHybridGmi) {
          scores = combine_hybrid_gmi(scores, hist, bs.gmi_weight);
        }
        chosen = scores[select_best(scores)].variable;
        break;
      }
    }
    stats.branch_time += seconds_since(branch_start);
    if (prunable) continue;

    if (node.id == 0) stats.root_branch_var = chosen;
    stats.branch_sequence.push_back(chosen);
    const double value = original_value(lp, sf, chosen);
    auto [down, up] = branch(node, chosen, value, next_id, 0.0);
    next_id += 2;
    auto basis = std::make_shared<const Basis>(lp.basis);
    down.lower_bound = up.lower_bound = lp.objective;
    down.warm_start = up.warm_start = basis;
    push(std::move(down));
    push(std::move(up));
  }

  stats.bound = stats.incumbent;
  while (!open.empty()) {
    stats.bound = std::min(stats.bound, pool[open.top().slot].lower_bound);
    open.pop();
  }
  if (root_pending) stats.bound = std::min(stats.bound, root_lp.objective);
  out.solution.values = incumbent_x;
  if (limit_status != SolveStatus::kOptimal) return finish(limit_status);
  if (!std::isfinite(stats.incumbent)) return finish(SolveStatus::kInfeasible);
  return finish(SolveStatus::kOptimal);
}

}  // namespace splitbranch
