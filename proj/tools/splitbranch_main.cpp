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

// Command-line front end:
//
//   splitbranch solve <file.mps> --rule R --seed S [limits...]
//   splitbranch compare --manifest M --rules r1,r2 --seeds 1..5 --out results.csv
//   splitbranch gen --family F --seed S --out dir --count N
//   splitbranch cuts <file.mps> --rounds K --out cuts.csv
//
// Options also read SPLITBRANCH_<NAME> environment variables; flags win.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "splitbranch/bench.hpp"
#include "splitbranch/bnb.hpp"
#include "splitbranch/cutgen.hpp"
#include "splitbranch/error.hpp"
#include "splitbranch/io.hpp"

namespace sb = splitbranch;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<sb::Rule> parse_rules(const std::string& list) {
  std::vector<sb::Rule> rules;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (!name.empty()) rules.push_back(sb::parse_rule(name));
  }
  if (rules.empty()) throw sb::Error(sb::ErrorCode::kInvalidParams, "no rules given");
  return rules;
}

struct SolveArgs {
  std::string file;
  std::string rule = "pseudocost";
  std::uint64_t seed = 1;
  double time_limit = 60.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double gmi_weight = 1e-5;
  int root_cut_rounds = 5;
  std::optional<double> provided;
  std::string node_selection = "best";
  bool print_solution = false;
};

int run_solve(const SolveArgs& a) {
  const sb::Milp p = sb::read_mps_file(a.file);
  sb::SolveSettings s;
  s.rule = sb::parse_rule(a.rule);
  s.seed = a.seed;
  s.time_limit = a.time_limit;
  s.node_limit = a.node_limit;
  s.branching.gmi_weight = a.gmi_weight;
  s.root_cut_rounds = a.root_cut_rounds;
  s.provided_objective = a.provided;
  if (a.node_selection == "dfs") {
    s.node_selection = sb::NodeSelection::kDepthFirst;
  } else if (a.node_selection != "best") {
    throw sb::Error(sb::ErrorCode::kInvalidParams, "node selection must be best or dfs");
  }
  const sb::SolveOutput out = sb::solve(p, s);
  const sb::SolveStats& st = out.stats;
  std::cout << "instance        " << (p.name.empty() ? a.file : p.name) << "\n"
            << "rule            " << sb::to_string(s.rule) << "\n"
            << "seed            " << s.seed << "\n"
            << "status          " << sb::to_string(st.status) << "\n"
            << "objective       " << num(st.incumbent) << "\n"
            << "bound           " << num(st.bound) << "\n"
            << "gap             " << num(st.gap) << "\n"
            << "nodes           " << st.nodes << "\n"
            << "time_s          " << num(st.total_time) << "\n"
            << "branch_time_s   " << num(st.branch_time) << "\n"
            << "lp_iterations   " << st.lp_iterations << "\n"
            << "cuts_added      " << st.cuts_added << "\n"
            << "root_branch_var " << st.root_branch_var << "\n";
  if (a.print_solution) {
    for (std::size_t j = 0; j < out.solution.values.size(); ++j) {
      std::cout << "  " << p.var_names[j] << " = " << num(out.solution.values[j]) << "\n";
    }
  }
  return st.status == sb::SolveStatus::kError ? 1 : 0;
}

struct CompareArgs {
  std::string manifest;
  std::string rules = "random,gmi";
  std::string seeds = "1..5";
  std::string out = "results.csv";
  bool provided = false;
  double time_limit = 60.0;
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double gmi_weight = 1e-5;
  int root_cut_rounds = 5;
  int threads = 1;
  bool restart = false;
  std::string tables;
  std::string improvements;
};

int run_compare(const CompareArgs& a) {
  sb::ExperimentConfig c;
  c.manifest_path = a.manifest;
  c.rules = parse_rules(a.rules);
  c.seeds = sb::parse_seed_list(a.seeds);
  c.out_csv = a.out;
  c.provided_solutions = a.provided;
  c.time_limit = a.time_limit;
  c.node_limit = a.node_limit;
  c.gmi_weight = a.gmi_weight;
  c.root_cut_rounds = a.root_cut_rounds;
  c.threads = a.threads;
  c.resume = !a.restart;
  const sb::ExperimentResult r = sb::run_experiment(c);
  std::ostringstream md;
  md << "runs executed: " << r.executed << ", records: " << r.records.size()
     << ", instances retained after filtering: " << r.retained.size() << "\n\n"
     << sb::to_markdown(r.solved_by_all) << "\n"
     << sb::to_markdown(r.solved_by_any) << "\n"
     << sb::to_markdown(r.ratios);
  std::cout << md.str();
  if (!a.tables.empty()) sb::write_text_file(a.tables, md.str());
  if (!a.improvements.empty() && c.rules.size() > 1) {
    sb::write_text_file(a.improvements,
                        sb::relative_improvement_csv(r.records, std::string(sb::to_string(c.rules[0])),
                                                     std::string(sb::to_string(c.rules[1])),
                                                     r.retained));
  }
  return 0;
}

struct GenArgs {
  std::string family = "knapsack";
  std::uint64_t seed = 1;
  std::string out = ".";
  int count = 1;
  sb::GeneratorParams params;
  bool with_optima = false;
  double time_limit = 60.0;
};

int run_gen(const GenArgs& a) {
  const sb::Family family = sb::parse_family(a.family);
  std::filesystem::create_directories(a.out);
  sb::InstanceManifest manifest;
  for (int k = 0; k < a.count; ++k) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(k);
    const sb::Milp p = sb::generate_instance(family, a.params, seed);
    const std::string file = p.name + ".mps";
    sb::write_mps_file(p, (std::filesystem::path(a.out) / file).string());
    sb::ManifestEntry entry{file, std::nullopt};
    if (a.with_optima) {
      sb::SolveSettings s;
      s.time_limit = a.time_limit;
      const sb::SolveOutput out = sb::solve(p, s);
      if (out.stats.status == sb::SolveStatus::kOptimal) entry.optimal_objective = out.stats.incumbent;
    }
    manifest.entries.push_back(entry);
    std::cout << file << "\n";
  }
  sb::write_text_file((std::filesystem::path(a.out) / "manifest.txt").string(),
                      sb::write_manifest(manifest));
  return 0;
}

struct CutsArgs {
  std::string file;
  int rounds = 1;
  std::string out = "cuts.csv";
};

int run_cuts(const CutsArgs& a) {
  const sb::Milp p = sb::read_mps_file(a.file);
  const sb::StandardForm sf = sb::standardize(p);
  const sb::LpResult root = sb::solve_lp(sf);
  if (root.status != sb::LpStatus::kOptimal) {
    std::cerr << "root LP is " << sb::to_string(root.status) << "\n";
    return 1;
  }
  sb::BranchHistory hist(p.num_vars(), 1);
  sb::BranchingSettings bs;
  std::string csv = "round,generating_var,kind,efficacy,norm,support_size\n";
  int round = 0;
  const sb::LpResult* last_lp = nullptr;
  auto emit = [&](const sb::Cut& nonbasic, const sb::Cut& structural, const sb::LpResult& lp,
                  int basic_column) {
    int support = 0;
    for (double v : structural.coefficients) support += v != 0.0;
    const std::string var = basic_column < sf.num_structural
                                ? p.var_names[basic_column]
                                : "col" + std::to_string(basic_column);
    csv += std::to_string(round) + "," + var + "," + std::string(sb::to_string(nonbasic.kind)) +
           "," + num(sb::score_cut(nonbasic, structural, lp, bs.cut)) + "," +
           num(structural.norm()) + "," + std::to_string(support) + "\n";
  };
  sb::CutObserver observer = [&](const sb::CutEvent& ev) {
    if (&ev.lp != last_lp) {
      last_lp = &ev.lp;
      ++round;
    }
    emit(ev.nonbasic, ev.structural, ev.lp, ev.row.basic_column);
    const sb::RowCut weak = sb::derive_row_cut(ev.row, sb::lp_integer_mask(ev.lp, sf),
                                               sb::CutKind::kWeakGmi, bs.cut);
    if (weak.gate == sb::RowGate::kAccepted) {
      emit(weak.cut, sb::to_structural_space(weak.cut, sf, ev.lp), ev.lp, ev.row.basic_column);
    }
  };
  const sb::RootCutResult rc = sb::root_cut_loop(sf, root, a.rounds, hist, bs, {}, &observer);
  sb::write_text_file(a.out, csv);
  std::cout << "rounds " << round << ", cuts added " << rc.cuts.size() << ", bound";
  for (double b : rc.bound_history) std::cout << " " << num(b);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitbranch: branch-and-cut MILP solver with GMI-based branching"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Solve one MPS instance");
  solve->add_option("file", solve_args.file, "MPS file")->required()->check(CLI::ExistingFile);
  solve->add_option("--rule", solve_args.rule,
                    "random|fullstrong|pseudocost|gmi|weakgmi|hybridgmi")
      ->envname("SPLITBRANCH_RULE")->capture_default_str();
  solve->add_option("--seed", solve_args.seed)->envname("SPLITBRANCH_SEED")->capture_default_str();
  solve->add_option("--time-limit", solve_args.time_limit, "seconds")
      ->envname("SPLITBRANCH_TIME_LIMIT")->capture_default_str();
  solve->add_option("--node-limit", solve_args.node_limit)->envname("SPLITBRANCH_NODE_LIMIT");
  solve->add_option("--gmi-weight", solve_args.gmi_weight, "hybridgmi weight")
      ->envname("SPLITBRANCH_GMI_WEIGHT")->capture_default_str();
  solve->add_option("--root-cut-rounds", solve_args.root_cut_rounds)
      ->envname("SPLITBRANCH_ROOT_CUT_ROUNDS")->capture_default_str();
  solve->add_option("--provide-solution", solve_args.provided,
                    "known optimal objective installed as the incumbent");
  solve->add_option("--node-selection", solve_args.node_selection, "best|dfs")
      ->envname("SPLITBRANCH_NODE_SELECTION")->capture_default_str();
  solve->add_flag("--print-solution", solve_args.print_solution);

  CompareArgs cmp_args;
  CLI::App* compare = app.add_subcommand("compare", "Run a rule x instance x seed grid");
  compare->add_option("--manifest", cmp_args.manifest)->required()->envname("SPLITBRANCH_MANIFEST");
  compare->add_option("--rules", cmp_args.rules, "comma separated, first is the baseline")
      ->envname("SPLITBRANCH_RULES")->capture_default_str();
  compare->add_option("--seeds", cmp_args.seeds, "e.g. 1..5 or 1,2,7")
      ->envname("SPLITBRANCH_SEEDS")->capture_default_str();
  compare->add_option("--out", cmp_args.out)->envname("SPLITBRANCH_OUT")->capture_default_str();
  compare->add_flag("--provided-solutions", cmp_args.provided,
                    "install manifest optima as incumbents");
  compare->add_option("--time-limit", cmp_args.time_limit)
      ->envname("SPLITBRANCH_TIME_LIMIT")->capture_default_str();
  compare->add_option("--node-limit", cmp_args.node_limit)->envname("SPLITBRANCH_NODE_LIMIT");
  compare->add_option("--gmi-weight", cmp_args.gmi_weight)
      ->envname("SPLITBRANCH_GMI_WEIGHT")->capture_default_str();
  compare->add_option("--root-cut-rounds", cmp_args.root_cut_rounds)
      ->envname("SPLITBRANCH_ROOT_CUT_ROUNDS")->capture_default_str();
  compare->add_option("--threads", cmp_args.threads)
      ->envname("SPLITBRANCH_THREADS")->capture_default_str()->check(CLI::PositiveNumber);
  compare->add_flag("--restart", cmp_args.restart, "ignore and overwrite an existing --out");
  compare->add_option("--tables", cmp_args.tables, "also write the markdown tables here");
  compare->add_option("--improvements", cmp_args.improvements,
                      "per-pair relative node improvement CSV (second rule vs first)");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate synthetic instances");
  gen->add_option("--family", gen_args.family, "knapsack|setcover|mixed")
      ->envname("SPLITBRANCH_FAMILY")->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "first seed")->envname("SPLITBRANCH_SEED")
      ->capture_default_str();
  gen->add_option("--out", gen_args.out, "output directory")->required();
  gen->add_option("--count", gen_args.count)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--vars", gen_args.params.num_vars)->capture_default_str();
  gen->add_option("--rows", gen_args.params.num_rows)->capture_default_str();
  gen->add_option("--max-range", gen_args.params.max_range)->capture_default_str();
  gen->add_option("--max-grid", gen_args.params.max_grid, "cap on the integer grid size (0: none)")
      ->capture_default_str();
  gen->add_flag("--with-optima", gen_args.with_optima, "solve and record optima in the manifest");
  gen->add_option("--time-limit", gen_args.time_limit)->envname("SPLITBRANCH_TIME_LIMIT");

  CutsArgs cuts_args;
  CLI::App* cuts = app.add_subcommand("cuts", "Dump root GMI and weak-GMI cuts");
  cuts->add_option("file", cuts_args.file)->required()->check(CLI::ExistingFile);
  cuts->add_option("--rounds", cuts_args.rounds)->envname("SPLITBRANCH_ROOT_CUT_ROUNDS")
      ->capture_default_str();
  cuts->add_option("--out", cuts_args.out)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(solve_args);
    if (*compare) return run_compare(cmp_args);
    if (*gen) return run_gen(gen_args);
    if (*cuts) return run_cuts(cuts_args);
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
