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

// Branching-candidate scoring rules.
//
//   random      uniform pick with the run's seeded generator
//   fullstrong  product of child LP bound gains
//   pseudocost  reliability pseudo-cost (strong-branch initialization until
//               both directions have `reliability` observations)
//   gmi         efficacy of the GMI cut of the candidate's tableau row
//   weakgmi     same with the weak-GMI cut
//   hybridgmi   pseudocost + weight * last normalized GMI efficacy
//
// Every rule breaks ties towards the lowest variable index.

#ifndef SPLITBRANCH_BRANCHING_HPP_
#define SPLITBRANCH_BRANCHING_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "splitbranch/cutgen.hpp"
#include "splitbranch/model.hpp"
#include "splitbranch/simplex.hpp"

namespace splitbranch {

enum class Rule { kRandom, kFullStrong, kPseudocost, kGmi, kWeakGmi, kHybridGmi };

std::string_view to_string(Rule rule);
// Accepts the CLI names; throws Error(kInvalidParams) otherwise.
Rule parse_rule(std::string_view name);

enum class Direction { kDown, kUp };

struct BranchingSettings {
  double epsilon = 1e-6;           // floor on each gain in the product score
  double infeasible_gain = 1e10;   // gain assigned to an infeasible child
  int reliability = 8;
  double gmi_weight = 1e-5;
  double gmi_record_eps = 1e-4;
  bool gmi_average = false;        // running average instead of most recent
  CutSettings cut;
};

struct PseudocostRecord {
  double down_sum = 0.0;
  double up_sum = 0.0;
  int down_count = 0;
  int up_count = 0;
  int strong_inits = 0;
};

class BranchHistory {
 public:
  BranchHistory(int num_vars, std::uint64_t seed);

  int num_vars() const { return static_cast<int>(pseudocosts_.size()); }
  const PseudocostRecord& pseudocost(int j) const { return pseudocosts_[j]; }
  PseudocostRecord& pseudocost(int j) { return pseudocosts_[j]; }

  // Average unit gain; when `j` has no observation in that direction, the
  // mean over all observed variables (1 when nothing is observed yet).
  double unit_gain(int j, Direction dir) const;

  std::optional<double> last_gmi_efficacy(int j) const { return last_gmi_[j]; }
  void set_gmi_efficacy(int j, double normalized, bool average);
  int gmi_records(int j) const { return gmi_count_[j]; }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::vector<PseudocostRecord> pseudocosts_;
  std::vector<std::optional<double>> last_gmi_;
  std::vector<double> gmi_sum_;
  std::vector<int> gmi_count_;
  std::mt19937_64 rng_;
};

struct CandidateScore {
  int variable = -1;
  double score = 0.0;
  double base = 0.0;
  double gmi_term = 0.0;
};

// Index into `scores` of the argmax (ties: lowest variable index), or -1.
int select_best(std::span<const CandidateScore> scores);

// Fractional integer variables of the LP solution in original index order.
std::vector<int> enumerate_candidates(const LpResult& res, const StandardForm& sf,
                                      double int_tol = 1e-6);

// Original-space LP value of a variable.
double original_value(const LpResult& res, const StandardForm& sf, int var);

std::vector<CandidateScore> score_by_cut(CutKind kind,
                                         std::span<const int> candidates,
                                         const LpResult& res,
                                         const StandardForm& sf,
                                         const BranchingSettings& settings,
                                         const CutObserver* observer = nullptr);

// What the strong-branching rules need to re-solve child LPs.
struct NodeContext {
  const StandardForm& sf;
  std::span<const Cut> cuts;           // global cuts in the LP
  std::span<const double> lower;       // node bounds, original space
  std::span<const double> upper;
  const LpResult& lp;                  // node LP (optimal)
  LpLimits limits;
  std::int64_t* lp_iterations = nullptr;  // accumulates child LP iterations
};

struct ChildGains {
  double down = 0.0;
  double up = 0.0;
  bool down_infeasible = false;
  bool up_infeasible = false;
};

struct StrongBranchResult {
  std::vector<CandidateScore> scores;
  std::vector<ChildGains> gains;
  bool prunable = false;  // some candidate has both children infeasible
};

// score = max(gain_down, eps) * max(gain_up, eps).
double product_score(double down, double up, double epsilon);

StrongBranchResult score_fullstrong(std::span<const int> candidates,
                                    const NodeContext& ctx,
                                    const BranchingSettings& settings);

// Reliability pseudo-cost; unreliable candidates are strong-branched and
// their gains recorded in `hist`. `prunable` is set like score_fullstrong.
std::vector<CandidateScore> score_pseudocost(std::span<const int> candidates,
                                             BranchHistory& hist,
                                             const NodeContext& ctx,
                                             const BranchingSettings& settings,
                                             bool* prunable = nullptr);

CandidateScore score_random(std::span<const int> candidates, BranchHistory& hist);

// Records one separation round: for each cut whose raw efficacy exceeds
// `eps`, stores raw / (max raw of the round) for its generating variable.
void record_gmi_history(BranchHistory& hist, std::span<const ScoredCut> round,
                        double eps = 1e-4, bool average = false);

// score' = base + weight * last_gmi_efficacy (0 when never recorded).
std::vector<CandidateScore> combine_hybrid_gmi(std::span<const CandidateScore> base,
                                               const BranchHistory& hist,
                                               double weight = 1e-5);

// Adds delta/f (down) or delta/(1-f) (up) to the running sums; negative
// gains count as 0.
void update_pseudocost(BranchHistory& hist, int var, Direction dir,
                       double fraction, double delta);

}  // namespace splitbranch

#endif  // SPLITBRANCH_BRANCHING_HPP_
