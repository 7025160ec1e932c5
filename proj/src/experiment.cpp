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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "splitbranch/bench.hpp"
#include "splitbranch/error.hpp"
#include "splitbranch/io.hpp"

namespace splitbranch {
namespace {

constexpr std::string_view kHeader =
    "instance,seed,rule,status,nodes,time_s,branch_time_s,objective,bound,root_branch_var";

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw Error(ErrorCode::kMalformedRecord, "bad number '" + s + "' in runs CSV");
  }
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw Error(ErrorCode::kMalformedRecord, "bad integer '" + s + "' in runs CSV");
  }
  return v;
}

using RunKey = std::tuple<std::string, std::string, std::uint64_t>;  // instance, rule, seed

std::map<RunKey, const RunRecord*> index_runs(std::span<const RunRecord> records) {
  std::map<RunKey, const RunRecord*> index;
  for (const RunRecord& r : records) index[{r.instance, r.rule, r.seed}] = &r;
  return index;
}

// Seeds observed per instance over the given rules.
std::map<std::string, std::set<std::uint64_t>> seeds_by_instance(
    std::span<const RunRecord> records, std::span<const std::string> rules) {
  std::map<std::string, std::set<std::uint64_t>> out;
  for (const RunRecord& r : records) {
    if (std::find(rules.begin(), rules.end(), r.rule) != rules.end()) {
      out[r.instance].insert(r.seed);
    }
  }
  return out;
}

double safe_sgm(const std::vector<double>& v, double shift) {
  return v.empty() ? std::nan("") : shifted_geometric_mean(v, shift);
}

std::string cell(double v, int precision) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string s = "|";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      s += " " + cells[c] + std::string(width[c] - cells[c].size(), ' ') + " |";
    }
    return s + "\n";
  };
  std::string out = line(header);
  out += "|";
  for (std::size_t w : width) out += std::string(w + 2, '-') + "|";
  out += "\n";
  for (const auto& row : rows) out += line(row);
  return out;
}

}  // namespace

std::string_view runs_csv_header() { return kHeader; }

std::string format_run(const RunRecord& r) {
  return csv_field(r.instance) + "," + std::to_string(r.seed) + "," + csv_field(r.rule) + "," +
         csv_field(r.status) + "," + std::to_string(r.nodes) + "," + fmt(r.time_s) + "," +
         fmt(r.branch_time_s) + "," + fmt(r.objective) + "," + fmt(r.bound) + "," +
         std::to_string(r.root_branch_var);
}

std::string write_runs_csv(std::span<const RunRecord> records) {
  std::string out(kHeader);
  out += "\n";
  for (const RunRecord& r : records) out += format_run(r) + "\n";
  return out;
}

std::vector<RunRecord> parse_runs_csv(std::string_view text) {
  std::vector<RunRecord> records;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader) throw Error(ErrorCode::kMalformedRecord, "unexpected runs CSV header");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 10) {
      throw Error(ErrorCode::kMalformedRecord, "runs CSV row has " + std::to_string(f.size()) +
                                                   " fields: " + std::string(line));
    }
    RunRecord r;
    r.instance = f[0];
    r.seed = static_cast<std::uint64_t>(to_int(f[1]));
    r.rule = f[2];
    r.status = f[3];
    r.nodes = to_int(f[4]);
    r.time_s = to_double(f[5]);
    r.branch_time_s = to_double(f[6]);
    r.objective = to_double(f[7]);
    r.bound = to_double(f[8]);
    r.root_branch_var = static_cast<int>(to_int(f[9]));
    records.push_back(std::move(r));
  }
  return records;
}

RunRecord make_record(const std::string& instance, std::uint64_t seed, Rule rule,
                      const SolveOutput& out) {
  RunRecord r;
  r.instance = instance;
  r.seed = seed;
  r.rule = std::string(to_string(rule));
  r.status = std::string(to_string(out.stats.status));
  r.nodes = out.stats.nodes;
  r.time_s = out.stats.total_time;
  r.branch_time_s = out.stats.branch_time;
  r.objective = out.stats.incumbent;
  r.bound = out.stats.bound;
  r.root_branch_var = out.stats.root_branch_var;
  return r;
}

std::set<std::string> filter_runs(std::span<const RunRecord> records,
                                  std::span<const std::string> rules) {
  const auto index = index_runs(records);
  std::set<std::uint64_t> all_seeds;
  for (const auto& [inst, seeds] : seeds_by_instance(records, rules)) {
    all_seeds.insert(seeds.begin(), seeds.end());
  }
  std::set<std::string> retained;
  for (const auto& [inst, seeds] : seeds_by_instance(records, rules)) {
    bool keep = true;
    for (const std::string& rule : rules) {
      for (std::uint64_t seed : all_seeds) {
        auto it = index.find({inst, rule, seed});
        if (it == index.end()) {
          throw Error(ErrorCode::kIncompleteGrid, "missing run " + inst + " / " + rule +
                                                      " / seed " + std::to_string(seed));
        }
        const RunRecord& r = *it->second;
        const bool no_branching = r.status == "optimal" && r.root_branch_var < 0;
        const bool bad_status = r.status != "optimal" && r.status != "time_limit";
        if (no_branching || bad_status) keep = false;
      }
    }
    if (keep) retained.insert(inst);
  }
  return retained;
}

AffectedReport affected_pairs(std::span<const RunRecord> records, std::string_view rule_a,
                              std::string_view rule_b) {
  const auto index = index_runs(records);
  AffectedReport report;
  for (const RunRecord& a : records) {
    if (a.rule != rule_a || a.status != "optimal") continue;
    auto it = index.find({a.instance, std::string(rule_b), a.seed});
    if (it == index.end() || it->second->status != "optimal") continue;
    const RunRecord& b = *it->second;
    const PairKey key{a.instance, a.seed};
    report.both_optimal.push_back(key);
    if (a.nodes != b.nodes) report.affected.push_back(key);
    if (a.root_branch_var != b.root_branch_var) report.root_differs.push_back(key);
  }
  for (auto* v : {&report.both_optimal, &report.affected, &report.root_differs}) {
    std::sort(v->begin(), v->end());
  }
  return report;
}

std::vector<MetricSpec> default_metrics() {
  return {{"nodes", 100.0}, {"time_s", 10.0}, {"time_wo_branch_s", 10.0}, {"branch_time_s", 1.0}};
}

double metric_value(const RunRecord& r, std::string_view metric) {
  if (metric == "nodes") return static_cast<double>(r.nodes);
  if (metric == "time_s") return r.time_s;
  if (metric == "branch_time_s") return r.branch_time_s;
  if (metric == "time_wo_branch_s") return std::max(0.0, r.time_s - r.branch_time_s);
  throw Error(ErrorCode::kInvalidParams, "unknown metric " + std::string(metric));
}

AggregateTable aggregate(std::span<const RunRecord> records, std::span<const std::string> rules,
                         const std::set<std::string>& instances, PairSelection selection,
                         const std::vector<MetricSpec>& metrics) {
  const auto index = index_runs(records);
  AggregateTable table;
  table.title = selection == PairSelection::kSolvedByAll ? "solved by all rules"
                                                         : "solved by at least one rule";
  table.rules.assign(rules.begin(), rules.end());
  table.metrics = metrics;
  std::vector<std::vector<std::vector<double>>> values(
      rules.size(), std::vector<std::vector<double>>(metrics.size()));
  for (const auto& [inst, seeds] : seeds_by_instance(records, rules)) {
    if (!instances.count(inst)) continue;
    for (std::uint64_t seed : seeds) {
      std::vector<const RunRecord*> runs;
      int solved = 0;
      for (const std::string& rule : rules) {
        auto it = index.find({inst, rule, seed});
        if (it == index.end()) break;
        runs.push_back(it->second);
        if (it->second->status == "optimal") ++solved;
      }
      if (runs.size() != rules.size()) continue;
      const bool take = selection == PairSelection::kSolvedByAll
                            ? solved == static_cast<int>(rules.size())
                            : solved > 0;
      if (!take) continue;
      ++table.pair_count;
      for (std::size_t r = 0; r < rules.size(); ++r) {
        for (std::size_t m = 0; m < metrics.size(); ++m) {
          values[r][m].push_back(metric_value(*runs[r], metrics[m].name));
        }
      }
    }
  }
  table.sgm.assign(rules.size(), std::vector<double>(metrics.size()));
  for (std::size_t r = 0; r < rules.size(); ++r) {
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      table.sgm[r][m] = safe_sgm(values[r][m], metrics[m].shift);
    }
  }
  return table;
}

RatioTable ratio_table(std::span<const RunRecord> records, const std::string& baseline,
                       std::span<const std::string> rules, const std::set<std::string>& instances,
                       const std::vector<MetricSpec>& metrics) {
  const auto index = index_runs(records);
  RatioTable table;
  table.baseline = baseline;
  table.metrics = metrics;
  for (const std::string& rule : rules) {
    if (rule == baseline) continue;
    RatioRow row;
    row.rule = rule;
    std::vector<std::vector<double>> base_v(metrics.size());
    std::vector<std::vector<double>> rule_v(metrics.size());
    std::vector<std::vector<double>> diff(metrics.size());
    for (const PairKey& key : affected_pairs(records, rule, baseline).affected) {
      if (!instances.count(key.first)) continue;
      const RunRecord& a = *index.at({key.first, rule, key.second});
      const RunRecord& b = *index.at({key.first, baseline, key.second});
      ++row.pair_count;
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        const double va = metric_value(a, metrics[m].name);
        const double vb = metric_value(b, metrics[m].name);
        rule_v[m].push_back(va);
        base_v[m].push_back(vb);
        diff[m].push_back(va - vb);
      }
    }
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      const double sb = safe_sgm(base_v[m], metrics[m].shift);
      const double sr = safe_sgm(rule_v[m], metrics[m].shift);
      row.ratio.push_back(sb > 0.0 ? sr / sb : std::nan(""));
      double p = std::nan("");
      if (!diff[m].empty()) {
        try {
          p = wilcoxon_signed_rank(diff[m]).p_two_sided;
        } catch (const Error&) {
        }
      }
      row.p_value.push_back(p);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_markdown(const AggregateTable& table) {
  std::vector<std::string> header{"rule"};
  for (const MetricSpec& m : table.metrics) header.push_back(m.name + " (shift " + cell(m.shift, 0) + ")");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < table.rules.size(); ++r) {
    std::vector<std::string> row{table.rules[r]};
    for (std::size_t m = 0; m < table.metrics.size(); ++m) {
      row.push_back(cell(table.sgm[r][m], table.metrics[m].name == "nodes" ? 1 : 3));
    }
    rows.push_back(std::move(row));
  }
  return "Shifted geometric means, " + table.title + " (" + std::to_string(table.pair_count) +
         " instance-seed pairs)\n\n" + markdown_table(header, rows);
}

std::string to_markdown(const RatioTable& table) {
  std::vector<std::string> header{"rule", "pairs"};
  for (const MetricSpec& m : table.metrics) {
    header.push_back(m.name + " ratio");
    header.push_back(m.name + " p");
  }
  std::vector<std::vector<std::string>> rows;
  for (const RatioRow& r : table.rows) {
    std::vector<std::string> row{r.rule, std::to_string(r.pair_count)};
    for (std::size_t m = 0; m < table.metrics.size(); ++m) {
      row.push_back(cell(r.ratio[m], 3));
      row.push_back(cell(r.p_value[m], 4));
    }
    rows.push_back(std::move(row));
  }
  return "Ratio of shifted geometric means against " + table.baseline +
         " over affected instance-seed pairs\n\n" + markdown_table(header, rows);
}

std::string relative_improvement_csv(std::span<const RunRecord> records,
                                     const std::string& baseline, const std::string& rule,
                                     const std::set<std::string>& instances) {
  const auto index = index_runs(records);
  std::string out = "instance,seed,baseline_nodes,rule_nodes,relative_improvement\n";
  for (const PairKey& key : affected_pairs(records, rule, baseline).affected) {
    if (!instances.count(key.first)) continue;
    const double b = static_cast<double>(index.at({key.first, baseline, key.second})->nodes);
    const double r = static_cast<double>(index.at({key.first, rule, key.second})->nodes);
    out += csv_field(key.first) + "," + std::to_string(key.second) + "," + fmt(b) + "," + fmt(r) +
           "," + fmt(b > 0.0 ? (b - r) / b : 0.0) + "\n";
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](std::string_view s) -> std::uint64_t {
    const std::string str(s);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (str.empty() || used != str.size()) {
      throw Error(ErrorCode::kInvalidParams, "bad seed '" + str + "'");
    }
    return v;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const std::string_view part = text.substr(pos, comma - pos);
    const std::size_t dots = part.find("..");
    if (dots != std::string_view::npos) {
      const std::uint64_t lo = number(part.substr(0, dots));
      const std::uint64_t hi = number(part.substr(dots + 2));
      if (hi < lo || hi - lo > 100000) throw Error(ErrorCode::kInvalidParams, "bad seed range");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(number(part));
    }
    pos = comma + 1;
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.rules.empty() || config.seeds.empty() || config.threads < 1) {
    throw Error(ErrorCode::kInvalidParams, "experiment needs rules, seeds and threads >= 1");
  }
  const InstanceManifest manifest = read_manifest_file(config.manifest_path);
  std::vector<std::string> rule_names;
  for (Rule r : config.rules) rule_names.emplace_back(to_string(r));

  std::vector<RunRecord> existing;
  if (!config.out_csv.empty() && config.resume && std::filesystem::exists(config.out_csv)) {
    existing = parse_runs_csv(read_text_file(config.out_csv));
  }
  std::set<RunKey> done;
  for (const RunRecord& r : existing) done.insert({r.instance, r.rule, r.seed});

  struct Task {
    std::size_t entry;
    Rule rule;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
    for (Rule rule : config.rules) {
      for (std::uint64_t seed : config.seeds) {
        if (!done.count({manifest.entries[e].path, std::string(to_string(rule)), seed})) {
          tasks.push_back({e, rule, seed});
        }
      }
    }
  }

  std::ofstream sink;
  if (!config.out_csv.empty()) {
    const bool fresh = !config.resume || !std::filesystem::exists(config.out_csv) ||
                       std::filesystem::file_size(config.out_csv) == 0;
    sink.open(config.out_csv, fresh ? std::ios::trunc : std::ios::app);
    if (!sink) throw Error(ErrorCode::kIo, "cannot write " + config.out_csv);
    if (fresh) {
      sink << kHeader << "\n";
      sink.flush();
    }
  }

  // Instances are parsed once; a load failure turns every run into an error.
  std::vector<std::optional<Milp>> models(manifest.entries.size());
  std::vector<std::string> load_error(manifest.entries.size());
  for (std::size_t e = 0; e < manifest.entries.size(); ++e) {
    try {
      models[e] = read_mps_file(manifest.entries[e].path);
    } catch (const Error& err) {
      load_error[e] = err.what();
    }
  }

  std::vector<RunRecord> fresh_records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      const ManifestEntry& entry = manifest.entries[task.entry];
      RunRecord rec;
      rec.instance = entry.path;
      rec.seed = task.seed;
      rec.rule = std::string(to_string(task.rule));
      rec.status = "error";
      if (models[task.entry]) {
        SolveSettings s;
        s.rule = task.rule;
        s.seed = task.seed;
        s.time_limit = config.time_limit;
        s.node_limit = config.node_limit;
        s.root_cut_rounds = config.root_cut_rounds;
        s.branching.gmi_weight = config.gmi_weight;
        if (config.provided_solutions) s.provided_objective = entry.optimal_objective;
        try {
          rec = make_record(entry.path, task.seed, task.rule, solve(*models[task.entry], s));
        } catch (const std::exception&) {
          rec.status = "error";
        }
      }
      fresh_records[t] = rec;
      if (sink.is_open()) {
        std::lock_guard<std::mutex> lock(sink_mutex);
        sink << format_run(rec) << "\n";
        sink.flush();
      }
    }
  };
  const int workers = std::min<int>(config.threads, std::max<std::size_t>(1, tasks.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  ExperimentResult result;
  result.executed = static_cast<int>(tasks.size());
  std::set<std::string> paths;
  for (const ManifestEntry& e : manifest.entries) paths.insert(e.path);
  const std::set<std::uint64_t> seeds(config.seeds.begin(), config.seeds.end());
  auto in_grid = [&](const RunRecord& r) {
    return paths.count(r.instance) && seeds.count(r.seed) &&
           std::find(rule_names.begin(), rule_names.end(), r.rule) != rule_names.end();
  };
  for (const RunRecord& r : existing) {
    if (in_grid(r)) result.records.push_back(r);
  }
  for (const RunRecord& r : fresh_records) result.records.push_back(r);
  std::sort(result.records.begin(), result.records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.rule, a.seed) < std::tie(b.instance, b.rule, b.seed);
  });

  result.retained = filter_runs(result.records, rule_names);
  result.solved_by_all =
      aggregate(result.records, rule_names, result.retained, PairSelection::kSolvedByAll);
  result.solved_by_any =
      aggregate(result.records, rule_names, result.retained, PairSelection::kSolvedByAny);
  result.ratios = ratio_table(result.records, rule_names.front(), rule_names, result.retained);
  return result;
}

}  // namespace splitbranch
