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

// Branch-and-cut driver: best-bound (or depth-first) tree search with
// optional root GMI rounds and a pluggable branching rule.

#ifndef SPLITBRANCH_BNB_HPP_
#define SPLITBRANCH_BNB_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "splitbranch/branching.hpp"
#include "splitbranch/cutgen.hpp"
#include "splitbranch/model.hpp"
#include "splitbranch/simplex.hpp"

namespace splitbranch {

struct Node {
  std::int64_t id = 0;
  std::int64_t parent = -1;
  int depth = 0;
  // Accumulated branching bounds in original space (full vectors).
  std::vector<double> lower;
  std::vector<double> upper;
  double lower_bound = -kInfinity;  // parent LP objective
  std::shared_ptr<const Basis> warm_start;
  // How this node was created, for pseudo-cost updates.
  int branch_var = -1;
  Direction branch_dir = Direction::kDown;
  double branch_fraction = 0.0;
};

// Children with upper_j := floor(lp_value) and lower_j := ceil(lp_value).
// Ids are first_id and first_id + 1. Throws Error(kNotFractional).
std::pair<Node, Node> branch(const Node& node, int var, double lp_value,
                             std::int64_t first_id, double int_tol = 1e-6);

enum class NodeSelection { kBestBound, kDepthFirst };

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kTimeLimit, kNodeLimit, kError };

std::string_view to_string(SolveStatus status);

struct SolveObserver {
  // Every tableau cut derived during the solve, with the bounds of the node it
  // was derived at (original space).
  std::function<void(const CutEvent&, std::span<const double> lower,
                     std::span<const double> upper)>
      on_cut;
  // Every node whose LP was solved to optimality.
  std::function<void(const Node&, const LpResult&)> on_node;
};

struct SolveSettings {
  Rule rule = Rule::kPseudocost;
  std::uint64_t seed = 1;
  double time_limit = 60.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  int root_cut_rounds = 5;
  std::optional<double> provided_objective;
  NodeSelection node_selection = NodeSelection::kBestBound;
  BranchingSettings branching;
  Tolerances tol;
  LpLimits lp;
  double prune_tol = 1e-9;
  const SolveObserver* observer = nullptr;
};

struct SolveStats {
  std::int64_t nodes = 0;
  double total_time = 0.0;
  double branch_time = 0.0;
  std::int64_t lp_iterations = 0;
  int cuts_added = 0;
  double incumbent = kInfinity;
  double bound = -kInfinity;
  double gap = kInfinity;
  SolveStatus status = SolveStatus::kError;
  int root_branch_var = -1;
  std::vector<int> branch_sequence;  // branching variable per branched node
};

struct SolveOutput {
  Solution solution;
  SolveStats stats;
};

// Infeasible/unbounded instances are reported through the status; numerical
// failures throw Error(kNumericalFailure).
SolveOutput solve(const Milp& p, const SolveSettings& settings = {});

struct RootCutResult {
  LpResult lp;
  std::vector<Cut> cuts;               // all cuts now in the LP
  std::vector<double> bound_history;   // LP bound before round 1 and after each
};

// Up to `rounds` separation rounds at the root: GMI history is recorded from
// every round's generated cuts, the selected cuts are appended and the LP
// re-solved. Stops early on an empty round or a bound gain below 1e-9.
RootCutResult root_cut_loop(const StandardForm& sf, LpResult root, int rounds,
                            BranchHistory& hist, const BranchingSettings& settings,
                            const LpLimits& limits = {},
                            const CutObserver* observer = nullptr,
                            const ColumnBounds* bounds = nullptr);

}  // namespace splitbranch

#endif  // SPLITBRANCH_BNB_HPP_
