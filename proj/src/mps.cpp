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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "splitbranch/error.hpp"
#include "splitbranch/io.hpp"

namespace splitbranch {
namespace {

constexpr double kMpsInfinity = 1e30;

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string upper_case(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

double parse_number(std::string_view token, int line_no) {
  const std::string s(token);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || std::isnan(v)) {
    throw Error(ErrorCode::kMalformedRecord,
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  if (v >= kMpsInfinity) return kInfinity;
  if (v <= -kMpsInfinity) return -kInfinity;
  return v;
}

std::string format_number(double v) {
  if (v == kInfinity) return "1e+30";
  if (v == -kInfinity) return "-1e+30";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

enum class Section { kNone, kName, kRows, kColumns, kRhs, kBounds, kObjSense, kEnd };

class MpsReader {
 public:
  Milp read(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && section_ != Section::kEnd) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      handle_line(line, line_no);
      if (nl == text.size()) break;
    }
    if (section_ != Section::kEnd) {
      throw Error(ErrorCode::kMalformedRecord, "missing ENDATA");
    }
    if (objective_row_.empty()) {
      throw Error(ErrorCode::kMalformedRecord, "no objective (N) row");
    }
    p_.validate();
    return std::move(p_);
  }

 private:
  [[noreturn]] void fail(int line_no, const std::string& msg) const {
    throw Error(ErrorCode::kMalformedRecord, "line " + std::to_string(line_no) + ": " + msg);
  }

  void handle_line(std::string_view line, int line_no) {
    const std::vector<std::string_view> tok = split_tokens(line);
    if (tok.empty() || tok[0].front() == '*') return;
    const bool header = !std::isspace(static_cast<unsigned char>(line.front()));
    if (header) {
      start_section(tok, line_no);
      return;
    }
    switch (section_) {
      case Section::kRows: row_record(tok, line_no); break;
      case Section::kColumns: column_record(tok, line_no); break;
      case Section::kRhs: rhs_record(tok, line_no); break;
      case Section::kBounds: bound_record(tok, line_no); break;
      case Section::kObjSense: objsense(tok[0]); break;
      default: fail(line_no, "record outside of a data section");
    }
  }

  void start_section(const std::vector<std::string_view>& tok, int line_no) {
    const std::string name = upper_case(tok[0]);
    if (name == "NAME") {
      if (section_ != Section::kNone) fail(line_no, "NAME must come first");
      section_ = Section::kName;
      if (tok.size() > 1) p_.name = std::string(tok[1]);
      return;
    }
    if (name == "ROWS") {
      section_ = Section::kRows;
    } else if (name == "COLUMNS") {
      section_ = Section::kColumns;
    } else if (name == "RHS") {
      section_ = Section::kRhs;
    } else if (name == "BOUNDS") {
      section_ = Section::kBounds;
    } else if (name == "OBJSENSE") {
      section_ = Section::kObjSense;
      if (tok.size() > 1) objsense(tok[1]);
    } else if (name == "ENDATA") {
      section_ = Section::kEnd;
    } else if (name == "RANGES") {
      throw Error(ErrorCode::kUnsupportedSection, "RANGES section is not supported");
    } else {
      throw Error(ErrorCode::kUnsupportedSection, "section " + name + " is not supported");
    }
  }

  void objsense(std::string_view value) {
    const std::string v = upper_case(value);
    if (v == "MAX" || v == "MAXIMIZE") {
      throw Error(ErrorCode::kUnsupportedSection,
                  "OBJSENSE MAX is not supported; negate the objective instead");
    }
    if (v != "MIN" && v != "MINIMIZE") {
      throw Error(ErrorCode::kMalformedRecord, "unknown OBJSENSE " + v);
    }
  }

  void row_record(const std::vector<std::string_view>& tok, int line_no) {
    if (tok.size() != 2) fail(line_no, "ROWS record needs a type and a name");
    const std::string type = upper_case(tok[0]);
    const std::string name(tok[1]);
    if (row_index_.count(name) || name == objective_row_ || free_rows_.count(name)) {
      throw Error(ErrorCode::kDuplicateEntry, "row " + name + " declared twice");
    }
    if (type == "N") {
      if (objective_row_.empty()) {
        objective_row_ = name;
        p_.objective_name = name;
      } else {
        free_rows_.insert(name);  // extra free rows are ignored
      }
      return;
    }
    RowSense sense;
    if (type == "L") {
      sense = RowSense::kLessEqual;
    } else if (type == "G") {
      sense = RowSense::kGreaterEqual;
    } else if (type == "E") {
      sense = RowSense::kEqual;
    } else {
      fail(line_no, "unknown row type " + type);
    }
    row_index_[name] = static_cast<int>(p_.rows.size());
    p_.rows.push_back(Row{name, {}, sense, 0.0});
  }

  void column_record(const std::vector<std::string_view>& tok, int line_no) {
    if (tok.size() >= 3 && (tok[1] == "'MARKER'" || upper_case(tok[1]) == "'MARKER'")) {
      const std::string kind = upper_case(tok[2]);
      if (kind == "'INTORG'") {
        in_integer_block_ = true;
      } else if (kind == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail(line_no, "unknown marker " + kind);
      }
      return;
    }
    if (tok.size() != 3 && tok.size() != 5) fail(line_no, "COLUMNS record needs 3 or 5 fields");
    const std::string col(tok[0]);
    if (current_column_ != col) {
      if (col_index_.count(col)) {
        throw Error(ErrorCode::kDuplicateEntry, "column " + col + " is not contiguous");
      }
      col_index_[col] = p_.num_vars();
      p_.var_names.push_back(col);
      p_.objective.push_back(0.0);
      p_.lower.push_back(0.0);
      p_.upper.push_back(kInfinity);
      p_.integer.push_back(in_integer_block_);
      for (Row& r : p_.rows) r.coefficients.push_back(0.0);
      current_column_ = col;
      seen_.clear();
    }
    const int j = col_index_[col];
    for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
      const std::string row(tok[k]);
      const double v = parse_number(tok[k + 1], line_no);
      if (!std::isfinite(v)) fail(line_no, "infinite matrix coefficient");
      if (!seen_.insert(row).second) {
        throw Error(ErrorCode::kDuplicateEntry, "entry (" + col + ", " + row + ") repeated");
      }
      if (row == objective_row_) {
        p_.objective[j] = v;
      } else if (free_rows_.count(row)) {
        continue;
      } else {
        auto it = row_index_.find(row);
        if (it == row_index_.end()) fail(line_no, "unknown row " + row);
        p_.rows[it->second].coefficients[j] = v;
      }
    }
  }

  void rhs_record(const std::vector<std::string_view>& tok, int line_no) {
    // With or without the leading set name.
    const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
    if (tok.size() < 2 || tok.size() > 5) fail(line_no, "RHS record needs 2 to 5 fields");
    for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
      const std::string row(tok[k]);
      const double v = parse_number(tok[k + 1], line_no);
      if (!rhs_seen_.insert(row).second) {
        throw Error(ErrorCode::kDuplicateEntry, "rhs of row " + row + " repeated");
      }
      if (row == objective_row_) {
        throw Error(ErrorCode::kUnsupportedSection, "objective constants are not supported");
      }
      if (free_rows_.count(row)) continue;
      auto it = row_index_.find(row);
      if (it == row_index_.end()) fail(line_no, "unknown row " + row);
      if (!std::isfinite(v)) fail(line_no, "infinite right-hand side");
      p_.rows[it->second].rhs = v;
    }
  }

  void bound_record(const std::vector<std::string_view>& tok, int line_no) {
    if (tok.size() < 2) fail(line_no, "BOUNDS record too short");
    const std::string type = upper_case(tok[0]);
    const bool valueless = type == "FR" || type == "MI" || type == "PL" || type == "BV";
    std::string col;
    std::optional<double> value;
    if (valueless) {
      // type [set] col [value]; a BV value is accepted and ignored.
      if (tok.size() == 2) {
        col = std::string(tok[1]);
      } else if (tok.size() == 3 || tok.size() == 4) {
        col = std::string(tok[2]);
      } else {
        fail(line_no, "bad " + type + " record");
      }
    } else {
      if (tok.size() == 3) {
        col = std::string(tok[1]);
        value = parse_number(tok[2], line_no);
      } else if (tok.size() == 4) {
        col = std::string(tok[2]);
        value = parse_number(tok[3], line_no);
      } else {
        fail(line_no, "bad " + type + " record");
      }
    }
    auto it = col_index_.find(col);
    if (it == col_index_.end()) fail(line_no, "unknown column " + col);
    const int j = it->second;
    if (!bound_seen_.insert(type + " " + col).second) {
      throw Error(ErrorCode::kDuplicateEntry, type + " bound of " + col + " repeated");
    }
    if (type == "LO" || type == "LI") {
      p_.lower[j] = *value;
      if (type == "LI") p_.integer[j] = true;
    } else if (type == "UP" || type == "UI") {
      p_.upper[j] = *value;
      if (type == "UI") p_.integer[j] = true;
    } else if (type == "FX") {
      p_.lower[j] = *value;
      p_.upper[j] = *value;
    } else if (type == "FR") {
      p_.lower[j] = -kInfinity;
      p_.upper[j] = kInfinity;
    } else if (type == "MI") {
      p_.lower[j] = -kInfinity;
    } else if (type == "PL") {
      p_.upper[j] = kInfinity;
    } else if (type == "BV") {
      p_.lower[j] = 0.0;
      p_.upper[j] = 1.0;
      p_.integer[j] = true;
    } else {
      fail(line_no, "unknown bound type " + type);
    }
  }

  Milp p_;
  Section section_ = Section::kNone;
  std::string objective_row_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> col_index_;
  std::string current_column_;
  std::unordered_set<std::string> seen_;
  std::unordered_set<std::string> rhs_seen_;
  std::unordered_set<std::string> bound_seen_;
  bool in_integer_block_ = false;
};

std::string numbered(char prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%04d", prefix, i + 1);
  return buf;
}

}  // namespace

Milp parse_mps(std::string_view text) { return MpsReader().read(text); }

Milp read_mps_file(const std::string& path) { return parse_mps(read_text_file(path)); }

std::string write_mps(const Milp& p) {
  p.validate();
  const int n = p.num_vars();
  std::vector<std::string> cols(n);
  for (int j = 0; j < n; ++j) {
    cols[j] = j < static_cast<int>(p.var_names.size()) && !p.var_names[j].empty()
                  ? p.var_names[j]
                  : numbered('C', j);
  }
  std::vector<std::string> rows(p.num_rows());
  for (int i = 0; i < p.num_rows(); ++i) {
    rows[i] = p.rows[i].name.empty() ? numbered('R', i) : p.rows[i].name;
  }
  const std::string obj = p.objective_name.empty() ? "obj" : p.objective_name;

  std::ostringstream out;
  out << "NAME          " << (p.name.empty() ? "unnamed" : p.name) << "\n";
  out << "ROWS\n";
  out << " N  " << obj << "\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    const char* type = p.rows[i].sense == RowSense::kLessEqual  ? "L"
                       : p.rows[i].sense == RowSense::kEqual ? "E"
                                                             : "G";
    out << " " << type << "  " << rows[i] << "\n";
  }
  out << "COLUMNS\n";
  bool in_block = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (p.integer[j] != in_block) {
      out << "    MARKER" << marker++ << "  'MARKER'  " << (p.integer[j] ? "'INTORG'" : "'INTEND'")
          << "\n";
      in_block = p.integer[j];
    }
    // The objective entry is always written so that empty columns survive.
    out << "    " << cols[j] << "  " << obj << "  " << format_number(p.objective[j]) << "\n";
    for (int i = 0; i < p.num_rows(); ++i) {
      const double v = p.rows[i].coefficients[j];
      if (v != 0.0) out << "    " << cols[j] << "  " << rows[i] << "  " << format_number(v) << "\n";
    }
  }
  if (in_block) out << "    MARKER" << marker << "  'MARKER'  'INTEND'\n";
  out << "RHS\n";
  for (int i = 0; i < p.num_rows(); ++i) {
    if (p.rows[i].rhs != 0.0) {
      out << "    RHS  " << rows[i] << "  " << format_number(p.rows[i].rhs) << "\n";
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const double l = p.lower[j];
    const double u = p.upper[j];
    if (l == u) {
      out << " FX BND  " << cols[j] << "  " << format_number(l) << "\n";
      continue;
    }
    if (l == -kInfinity && u == kInfinity) {
      out << " FR BND  " << cols[j] << "\n";
      continue;
    }
    if (p.integer[j] && l == 0.0 && u == 1.0) {
      out << " BV BND  " << cols[j] << "\n";
      continue;
    }
    if (l == -kInfinity) {
      out << " MI BND  " << cols[j] << "\n";
    } else if (l != 0.0 || std::signbit(l)) {
      out << " LO BND  " << cols[j] << "  " << format_number(l) << "\n";
    }
    if (u != kInfinity) out << " UP BND  " << cols[j] << "  " << format_number(u) << "\n";
  }
  out << "ENDATA\n";
  return out.str();
}

void write_mps_file(const Milp& p, const std::string& path) {
  write_text_file(path, write_mps(p));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

InstanceManifest parse_manifest(std::string_view text) {
  InstanceManifest m;
  std::unordered_set<std::string> paths;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    std::vector<std::string_view> tok = split_tokens(line);
    if (tok.empty()) continue;
    if (tok[0].front() == '#') {
      if (tok.size() == 3 && tok[1] == "splitbranch-manifest" && tok[2].size() > 1 &&
          tok[2].front() == 'v') {
        m.version = std::string(tok[2].substr(1));
      }
      continue;
    }
    // Trailing comment.
    for (std::size_t k = 1; k < tok.size(); ++k) {
      if (tok[k].front() == '#') {
        tok.resize(k);
        break;
      }
    }
    if (tok.size() > 2) {
      throw Error(ErrorCode::kMalformedRecord,
                  "manifest line " + std::to_string(line_no) + " has extra fields");
    }
    ManifestEntry e;
    e.path = std::string(tok[0]);
    if (tok.size() == 2) {
      const double v = parse_number(tok[1], line_no);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kMalformedRecord,
                    "manifest line " + std::to_string(line_no) + ": optimum must be finite");
      }
      e.optimal_objective = v;
    }
    if (!paths.insert(e.path).second) {
      throw Error(ErrorCode::kDuplicateEntry, "manifest lists " + e.path + " twice");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::string write_manifest(const InstanceManifest& manifest) {
  std::string out = "# splitbranch-manifest v" + manifest.version + "\n";
  for (const ManifestEntry& e : manifest.entries) {
    out += e.path;
    if (e.optimal_objective) out += " " + format_number(*e.optimal_objective);
    out += "\n";
  }
  return out;
}

InstanceManifest read_manifest_file(const std::string& path) {
  InstanceManifest m = parse_manifest(read_text_file(path));
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  for (ManifestEntry& e : m.entries) {
    const std::filesystem::path p(e.path);
    if (p.is_relative()) e.path = (dir / p).lexically_normal().string();
  }
  return m;
}

}  // namespace splitbranch
