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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "oracles.hpp"
#include "splitbranch/bench.hpp"
#include "splitbranch/bnb.hpp"
#include "splitbranch/cutgen.hpp"
#include "splitbranch/error.hpp"
#include "splitbranch/io.hpp"
#include "support.hpp"

namespace splitbranch {
namespace {

using Clock = std::chrono::steady_clock;

constexpr Rule kRules[] = {Rule::kRandom,     Rule::kGmi,     Rule::kWeakGmi,
                           Rule::kFullStrong, Rule::kPseudocost, Rule::kHybridGmi};
constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};

constexpr int kOracleInstances = 200;
constexpr double kOracleBudgetSeconds = 600.0;
constexpr int kTimingInstancesWanted = 50;
constexpr int kTimingInstancesMax = 400;

std::map<int, std::pair<bool, std::string>> results;

void report(int criterion, bool pass, const std::string& detail) {
  results[criterion] = {pass, detail};
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string key_of(const Cut& cut, std::span<const double> lower, std::span<const double> upper) {
  std::string k;
  char buf[32];
  for (std::size_t i = 0; i < cut.indices.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%d:%.17g,", cut.indices[i], cut.coefficients[i]);
    k += buf;
  }
  std::snprintf(buf, sizeof(buf), "<=%.17g|", cut.rhs);
  k += buf;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%g,%g;", lower[i], upper[i]);
    k += buf;
  }
  return k;
}

std::string key_of(const SplitDisjunction& s) {
  std::string k = std::to_string(s.rhs) + "|";
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    k += std::to_string(s.indices[i]) + ":" + std::to_string(s.coefficients[i]) + ",";
  }
  return k;
}

std::string key_of(const TableauRow& row) {
  std::string k;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%d=%.17g|", row.basic_column, row.rhs);
  k += buf;
  for (const TableauEntry& e : row.entries) {
    std::snprintf(buf, sizeof(buf), "%d%c%c%.17g,", e.column, e.complemented ? 'c' : 'n',
                  e.fixed ? 'f' : 'v', e.coefficient);
    k += buf;
  }
  return k;
}

// Accumulated evidence for the cut-related criteria.
struct CutAudit {
  std::int64_t cuts_seen = 0;
  std::int64_t cuts_checked = 0;
  std::int64_t cuts_invalid = 0;
  std::int64_t rows_checked = 0;
  std::int64_t dominance_violations = 0;
  std::int64_t efficacy_violations = 0;
  std::int64_t splits_checked = 0;
  std::int64_t splits_unsound = 0;
  std::string first_failure;
};

struct OracleInstance {
  Milp p;
  StandardForm sf;
  oracle::MilpOptimum opt;
  std::unique_ptr<CutValidator> validator;
};

bool split_is_sound(const SplitDisjunction& s, const std::vector<std::vector<double>>& points) {
  for (const std::vector<double>& x : points) {
    double v = 0.0;
    for (std::size_t i = 0; i < s.indices.size(); ++i) {
      v += static_cast<double>(s.coefficients[i]) * x[s.indices[i]];
    }
    if (v > static_cast<double>(s.rhs) + 1e-9 && v < static_cast<double>(s.rhs) + 1 - 1e-9) {
      return false;
    }
  }
  return true;
}

// Dominance and separation on one tableau row (nonbasic >= form gamma).
void audit_row(const TableauRow& row, const std::vector<bool>& mask, CutAudit& audit) {
  const RowCut g = derive_row_cut(row, mask, CutKind::kGmi);
  const RowCut w = derive_row_cut(row, mask, CutKind::kWeakGmi);
  if (g.gate != RowGate::kAccepted || w.gate != RowGate::kAccepted) return;
  ++audit.rows_checked;
  bool ok = true;
  for (const TableauEntry& e : row.entries) {
    if (e.fixed) continue;
    const double gg = -g.cut.coefficient(e.column);
    const double gw = -w.cut.coefficient(e.column);
    if (gg < 0.0 || gg > gw + 1e-9) ok = false;
    if (!mask[e.column] && std::abs(gg - gw) > 1e-9) ok = false;
  }
  if (!ok) ++audit.dominance_violations;
  for (const Cut* c : {&g.cut, &w.cut}) {
    const double eff = nonbasic_efficacy(*c);
    const int width = c->indices.empty()
                          ? 0
                          : *std::max_element(c->indices.begin(), c->indices.end()) + 1;
    const std::vector<double> zero(width, 0.0);
    const double direct = efficacy(*c, zero);
    if (!(eff > 0.0) || std::abs(eff - 1.0 / c->norm()) > 1e-9 || std::abs(direct - eff) > 1e-9) {
      ++audit.efficacy_violations;
    }
  }
}

void criterion_1_to_6() {
  const auto start = Clock::now();
  std::vector<OracleInstance> instances;
  for (int i = 0; i < kOracleInstances; ++i) {
    OracleInstance inst;
    inst.p = support::oracle_tier_instance(i);
    inst.sf = standardize(inst.p);
    inst.opt = oracle::brute_force(inst.p);
    inst.validator = std::make_unique<CutValidator>(inst.p);
    instances.push_back(std::move(inst));
  }

  CutAudit audit;
  std::int64_t solves = 0;
  std::int64_t wrong = 0;
  std::int64_t max_vars = 0;
  std::int64_t max_rows = 0;
  std::int64_t w0_pairs = 0;
  std::int64_t w0_mismatch = 0;
  std::string first_wrong;
  std::unordered_set<std::string> seen_cuts;
  std::unordered_set<std::string> seen_rows;
  std::unordered_set<std::string> seen_splits;

  for (const OracleInstance& inst : instances) {
    max_vars = std::max<std::int64_t>(max_vars, inst.p.integer_indices().size());
    max_rows = std::max<std::int64_t>(max_rows, inst.p.num_rows());
    const std::vector<std::vector<double>>& points = inst.opt.feasible_points;

    auto check_split = [&](const SplitDisjunction& s) {
      if (!seen_splits.insert(key_of(s)).second) return;
      ++audit.splits_checked;
      if (!split_is_sound(s, points)) {
        ++audit.splits_unsound;
        if (audit.first_failure.empty()) audit.first_failure = "unsound split on " + inst.p.name;
      }
    };

    SolveObserver obs;
    obs.on_cut = [&](const CutEvent& ev, std::span<const double> lower,
                     std::span<const double> upper) {
      ++audit.cuts_seen;
      const std::vector<bool> mask = lp_integer_mask(ev.lp, inst.sf);
      const Cut orig = to_original_space(ev.structural, inst.sf);
      if (seen_cuts.insert(inst.p.name + "#" + key_of(orig, lower, upper)).second) {
        ++audit.cuts_checked;
        const std::vector<double> lo(lower.begin(), lower.end());
        const std::vector<double> hi(upper.begin(), upper.end());
        if (!inst.validator->is_valid(orig, 1e-6, &lo, &hi)) {
          ++audit.cuts_invalid;
          if (audit.first_failure.empty()) audit.first_failure = "invalid cut on " + inst.p.name;
        }
      }
      if (seen_rows.insert(inst.p.name + "#" + key_of(ev.row)).second) {
        audit_row(ev.row, mask, audit);
        try {
          check_split(split_to_original(split_of_gmi(ev.row, mask), inst.sf, ev.lp));
        } catch (const Error&) {
        }
      }
    };
    obs.on_node = [&](const Node&, const LpResult& lp) {
      for (const FractionalBasic& fb : fractional_basics(lp, inst.sf)) {
        check_split(elementary_split(fb.column, original_value(lp, inst.sf, fb.column)));
      }
    };

    std::map<std::uint64_t, std::int64_t> pseudocost_nodes;
    for (Rule rule : kRules) {
      for (std::uint64_t seed : kSeeds) {
        SolveSettings s;
        s.rule = rule;
        s.seed = seed;
        s.observer = &obs;
        const SolveOutput out = solve(inst.p, s);
        ++solves;
        bool ok;
        if (inst.opt.objective) {
          ok = out.stats.status == SolveStatus::kOptimal &&
               std::abs(out.solution.objective - *inst.opt.objective) <= 1e-6;
        } else {
          ok = out.stats.status == SolveStatus::kInfeasible;
        }
        if (!ok) {
          ++wrong;
          if (first_wrong.empty()) {
            first_wrong = inst.p.name + "/" + std::string(to_string(rule)) + "/" +
                          std::to_string(seed);
          }
        }
        if (rule == Rule::kPseudocost) pseudocost_nodes[seed] = out.stats.nodes;
      }
    }
    for (std::uint64_t seed : kSeeds) {
      SolveSettings s;
      s.rule = Rule::kHybridGmi;
      s.seed = seed;
      s.branching.gmi_weight = 0.0;
      const SolveOutput out = solve(inst.p, s);
      ++w0_pairs;
      if (out.stats.nodes != pseudocost_nodes.at(seed)) ++w0_mismatch;
    }
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

  report(1, wrong == 0 && elapsed <= kOracleBudgetSeconds && max_vars <= 8 && max_rows <= 5,
         std::to_string(kOracleInstances) + " instances, " + std::to_string(solves) +
             " solves, " + std::to_string(wrong) + " mismatches" +
             (first_wrong.empty() ? "" : " (first " + first_wrong + ")") + ", max " +
             std::to_string(max_vars) + " integer vars / " + std::to_string(max_rows) +
             " rows" +
             fmt(", %.1f s (budget 600 s, includes criteria 2-4 and 6)", elapsed));
  report(2, audit.cuts_seen > 0 && audit.cuts_invalid == 0,
         std::to_string(audit.cuts_seen) + " cuts observed, " +
             std::to_string(audit.cuts_checked) + " distinct checked, " +
             std::to_string(audit.cuts_invalid) + " invalid" +
             (audit.first_failure.empty() ? "" : " (" + audit.first_failure + ")"));
  report(3, audit.rows_checked > 0 && audit.dominance_violations == 0 &&
                audit.efficacy_violations == 0,
         std::to_string(audit.rows_checked) + " rows, " +
             std::to_string(audit.dominance_violations) + " dominance violations, " +
             std::to_string(audit.efficacy_violations) + " efficacy violations");
  report(4, audit.splits_checked > 0 && audit.splits_unsound == 0,
         std::to_string(audit.splits_checked) + " distinct splits, " +
             std::to_string(audit.splits_unsound) + " unsound");
  report(6, w0_pairs > 0 && w0_mismatch == 0,
         std::to_string(w0_pairs) + " pairs, " + std::to_string(w0_mismatch) +
             " node-count mismatches vs pseudocost");
}

void criterion_5_and_7() {
  const auto start = Clock::now();
  std::vector<RunRecord> records;
  int suite = 0;
  int scanned = 0;
  for (int index = 0; index < kTimingInstancesMax && suite < kTimingInstancesWanted; ++index) {
    ++scanned;
    const Milp p = support::timing_tier_instance(index);
    SolveSettings probe;
    probe.rule = Rule::kRandom;
    probe.seed = 1;
    const SolveOutput first = solve(p, probe);
    if (first.stats.status != SolveStatus::kOptimal || first.stats.nodes < 10) continue;
    ++suite;
    for (std::uint64_t seed : kSeeds) {
      for (Rule rule : {Rule::kRandom, Rule::kGmi, Rule::kFullStrong, Rule::kPseudocost,
                        Rule::kHybridGmi}) {
        SolveSettings s;
        s.rule = rule;
        s.seed = seed;
        const SolveOutput out =
            rule == Rule::kRandom && seed == 1 ? first : solve(p, s);
        records.push_back(make_record(p.name, seed, rule, out));
      }
      SolveSettings w0;
      w0.rule = Rule::kHybridGmi;
      w0.seed = seed;
      w0.branching.gmi_weight = 0.0;
      RunRecord r = make_record(p.name, seed, Rule::kHybridGmi, solve(p, w0));
      r.rule = "hybridgmi_w0";
      records.push_back(r);
    }
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

  auto nodes_of = [&](const std::string& rule) {
    std::vector<double> v;
    for (const RunRecord& r : records) {
      if (r.rule == rule) v.push_back(static_cast<double>(r.nodes));
    }
    return v;
  };
  std::string detail = std::to_string(suite) + " instances (" + std::to_string(scanned) +
                       " scanned)";
  bool pass = suite >= kTimingInstancesWanted;
  bool all_optimal = std::all_of(records.begin(), records.end(),
                                 [](const RunRecord& r) { return r.status == "optimal"; });
  if (!all_optimal) detail += ", some runs hit limits";
  if (!records.empty()) {
    const double fs = shifted_geometric_mean(nodes_of("fullstrong"), 100);
    const double gm = shifted_geometric_mean(nodes_of("gmi"), 100);
    const double rn = shifted_geometric_mean(nodes_of("random"), 100);
    const std::vector<double> g = nodes_of("gmi");
    const std::vector<double> r = nodes_of("random");
    std::vector<double> diffs;
    for (std::size_t k = 0; k < g.size(); ++k) diffs.push_back(g[k] - r[k]);
    double p_less = 1.0;
    try {
      p_less = wilcoxon_signed_rank(diffs).p_less;
    } catch (const Error&) {
    }
    pass = pass && fs < gm && gm < rn && p_less < 0.05;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  ", sgm nodes fullstrong %.1f gmi %.1f random %.1f (pseudocost %.1f), "
                  "one-sided p(gmi<random) %.3g, %.1f s",
                  fs, gm, rn, shifted_geometric_mean(nodes_of("pseudocost"), 100), p_less,
                  elapsed);
    detail += buf;
  }
  report(5, pass, detail);

  int pairs = 0;
  int differs = 0;
  std::map<PairKey, int> w0_root;
  for (const RunRecord& r : records) {
    if (r.rule == "hybridgmi_w0") w0_root[{r.instance, r.seed}] = r.root_branch_var;
  }
  for (const RunRecord& r : records) {
    if (r.rule != "hybridgmi") continue;
    ++pairs;
    if (r.root_branch_var != w0_root.at({r.instance, r.seed})) ++differs;
  }
  const double frac = pairs > 0 ? static_cast<double>(differs) / pairs : 0.0;
  report(7, differs > 0,
         std::to_string(differs) + "/" + std::to_string(pairs) +
             fmt(" pairs differ at the root (fraction %.4f)", frac));
}

void criterion_8() {
  bool ok = true;
  std::string detail;
  const double g = shifted_geometric_mean(std::vector<double>{90, 990}, 10);
  ok = ok && std::abs(g - 306.2278) <= 1e-3;
  detail += fmt("sgm({90,990},10) = %.4f", g);
  for (double c : {0.0, 3.0, 250.0}) {
    const double s = shifted_geometric_mean(std::vector<double>(6, c), 100);
    ok = ok && std::abs(s - c) <= 1e-9 * std::max(1.0, c);
  }
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 10;
    std::vector<double> d(n);
    for (double& x : d) x = static_cast<double>(static_cast<int>(rng() % 11) - 5);
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0; })) continue;
    const WilcoxonResult r = wilcoxon_signed_rank(d);
    const oracle::WilcoxonOracle o = oracle::wilcoxon_by_enumeration(d);
    ++compared;
    if (!r.exact || std::abs(r.p_two_sided - o.p_two_sided) > 1e-12 ||
        std::abs(r.p_less - o.p_less) > 1e-12 || std::abs(r.p_greater - o.p_greater) > 1e-12) {
      ok = false;
    }
  }
  const WilcoxonResult ex = wilcoxon_signed_rank(std::vector<double>{1, 2, 3});
  ok = ok && ex.w_plus == 6.0 && std::abs(ex.p_two_sided - 0.25) <= 1e-12;
  detail += ", " + std::to_string(compared) + " exact Wilcoxon sets vs enumeration";
  report(8, ok, detail);
}

void criterion_9() {
  int matched = 0;
  int total = 0;
  double worst_residual = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Milp p = support::random_lp(seed);
    ++total;
    const auto ref = oracle::lp_by_vertices(p);
    const StandardForm sf = standardize(p);
    const LpResult res = solve_lp(sf);
    if (!ref) {
      if (res.status == LpStatus::kInfeasible) ++matched;
      continue;
    }
    if (res.status != LpStatus::kOptimal) continue;
    const double residual = support::equality_residual(sf, res);
    worst_residual = std::max(worst_residual, residual);
    if (std::abs(res.objective - ref->objective) <= 1e-6 && residual <= 1e-7) ++matched;
  }
  report(9, matched == total,
         std::to_string(matched) + "/" + std::to_string(total) +
             fmt(" LPs match the vertex oracle, worst residual %.2e", worst_residual));
}

void criterion_10() {
  int exact = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    GeneratorParams gp;
    gp.num_vars = 3 + i % 12;
    gp.num_rows = 1 + i % 6;
    gp.max_range = 1 + i % 9;
    const Family f = static_cast<Family>(i % 3);
    const Milp p = generate_instance(f, gp, 700 + i);
    if (parse_mps(write_mps(p)) == p) ++exact;
  }
  int repeat_ok = 0;
  int repeats = 0;
  for (int i = 0; i < 10; ++i) {
    const Milp p = i % 2 ? support::oracle_tier_instance(i) : support::timing_tier_instance(i);
    for (Rule rule : kRules) {
      SolveSettings s;
      s.rule = rule;
      s.seed = 1 + i % 5;
      const SolveOutput a = solve(p, s);
      const SolveOutput b = solve(p, s);
      ++repeats;
      if (a.stats.nodes == b.stats.nodes && a.solution.objective == b.solution.objective) {
        ++repeat_ok;
      }
    }
  }
  report(10, exact == total && repeat_ok == repeats,
         std::to_string(exact) + "/" + std::to_string(total) + " exact MPS round-trips, " +
             std::to_string(repeat_ok) + "/" + std::to_string(repeats) +
             " repeated runs identical");
}

}  // namespace
}  // namespace splitbranch

int main() {
  using namespace splitbranch;
  int status = 0;
  try {
    criterion_1_to_6();
    criterion_5_and_7();
    criterion_8();
    criterion_9();
    criterion_10();
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    status = 2;
  }
  for (const auto& [criterion, result] : results) {
    std::printf("criterion %d: %s  %s\n", criterion, result.first ? "PASS" : "FAIL",
                result.second.c_str());
    if (!result.first && status == 0) status = 1;
  }
  if (results.size() != 10 && status == 0) status = 1;
  return status;
}
