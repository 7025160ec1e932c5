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

// Benchmark harness: run grids of (instance, rule, seed), persist the runs as
// CSV, and aggregate them the way solver comparisons usually are reported
// (shifted geometric means, paired Wilcoxon tests, affected-pair ratios).

#ifndef SPLITBRANCH_BENCH_HPP_
#define SPLITBRANCH_BENCH_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splitbranch/bnb.hpp"
#include "splitbranch/branching.hpp"

namespace splitbranch {

// (prod (v_i + shift))^(1/n) - shift, evaluated as a mean of logs.
// Throws Error(kEmptyInput) on an empty input and Error(kInvalidParams) for
// negative values or a non-positive shift.
double shifted_geometric_mean(std::span<const double> values, double shift);

struct WilcoxonResult {
  double w_plus = 0.0;   // sum of ranks of positive differences
  double w_minus = 0.0;
  int n = 0;             // nonzero differences
  bool exact = false;
  double p_two_sided = 1.0;
  double p_less = 1.0;     // H1: differences tend to be negative
  double p_greater = 1.0;  // H1: differences tend to be positive
};

// Zero differences are dropped, ties get mid-ranks. Exact null distribution
// for n <= 20, normal approximation with continuity and tie correction above.
// Throws Error(kAllZeroDiffs) when nothing is left.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> diffs);

struct RunRecord {
  std::string instance;
  std::uint64_t seed = 0;
  std::string rule;
  std::string status;  // optimal, infeasible, time_limit, node_limit, error
  std::int64_t nodes = 0;
  double time_s = 0.0;
  double branch_time_s = 0.0;
  double objective = kInfinity;
  double bound = -kInfinity;
  int root_branch_var = -1;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

std::string_view runs_csv_header();
std::string format_run(const RunRecord& r);
std::string write_runs_csv(std::span<const RunRecord> records);
// Throws Error(kMalformedRecord) on a bad header or row.
std::vector<RunRecord> parse_runs_csv(std::string_view text);

RunRecord make_record(const std::string& instance, std::uint64_t seed, Rule rule,
                      const SolveOutput& out);

// Instances where every compared rule has every seed, minus those where some
// run branched zero times, errored, or hit a non-time limit. Throws
// Error(kIncompleteGrid) when an instance lacks some (rule, seed).
std::set<std::string> filter_runs(std::span<const RunRecord> records,
                                  std::span<const std::string> rules);

using PairKey = std::pair<std::string, std::uint64_t>;  // (instance, seed)

struct AffectedReport {
  std::vector<PairKey> both_optimal;
  std::vector<PairKey> affected;      // node counts differ
  std::vector<PairKey> root_differs;  // root branching variable differs
};

AffectedReport affected_pairs(std::span<const RunRecord> records,
                              std::string_view rule_a, std::string_view rule_b);

struct MetricSpec {
  std::string name;
  double shift = 1.0;
};

// nodes (shift 100), time_s (10), time_wo_branch_s (10), branch_time_s (1).
std::vector<MetricSpec> default_metrics();
double metric_value(const RunRecord& r, std::string_view metric);

enum class PairSelection { kSolvedByAll, kSolvedByAny };

struct AggregateTable {
  std::string title;
  std::vector<std::string> rules;
  std::vector<MetricSpec> metrics;
  std::vector<std::vector<double>> sgm;  // [rule][metric]
  int pair_count = 0;                    // same for every rule
};

AggregateTable aggregate(std::span<const RunRecord> records,
                         std::span<const std::string> rules,
                         const std::set<std::string>& instances, PairSelection selection,
                         const std::vector<MetricSpec>& metrics = default_metrics());

struct RatioRow {
  std::string rule;
  int pair_count = 0;
  std::vector<double> ratio;      // sgm(rule) / sgm(baseline) per metric
  std::vector<double> p_value;    // two-sided Wilcoxon per metric (NaN if n/a)
};

struct RatioTable {
  std::string baseline;
  std::vector<MetricSpec> metrics;
  std::vector<RatioRow> rows;
};

// Ratios over the pairs affected between each rule and the baseline.
RatioTable ratio_table(std::span<const RunRecord> records, const std::string& baseline,
                       std::span<const std::string> rules,
                       const std::set<std::string>& instances,
                       const std::vector<MetricSpec>& metrics = default_metrics());

std::string to_markdown(const AggregateTable& table);
std::string to_markdown(const RatioTable& table);

// Per-pair relative node improvement (baseline - rule) / baseline over the
// affected pairs, as CSV: instance,seed,baseline_nodes,rule_nodes,relative_improvement.
std::string relative_improvement_csv(std::span<const RunRecord> records,
                                     const std::string& baseline, const std::string& rule,
                                     const std::set<std::string>& instances);

struct ExperimentConfig {
  std::string manifest_path;
  std::vector<Rule> rules;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double time_limit = 60.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  int root_cut_rounds = 5;
  double gmi_weight = 1e-5;
  bool provided_solutions = false;  // install manifest optima as incumbents
  int threads = 1;
  std::string out_csv;              // appended to incrementally; empty = none
  bool resume = true;               // skip pairs already present in out_csv
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // sorted by (instance, rule, seed)
  std::set<std::string> retained;
  AggregateTable solved_by_all;
  AggregateTable solved_by_any;
  RatioTable ratios;               // against the first rule
  int executed = 0;                // runs performed in this call
};

// Per-run failures become records with status "error".
ExperimentResult run_experiment(const ExperimentConfig& config);

// "1..5" or "1,3,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace splitbranch

#endif  // SPLITBRANCH_BENCH_HPP_
