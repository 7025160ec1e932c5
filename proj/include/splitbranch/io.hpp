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

// Instance input and output: a free-format MPS subset, the experiment
// manifest, and seeded generators for the synthetic benchmark families.

#ifndef SPLITBRANCH_IO_HPP_
#define SPLITBRANCH_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitbranch/model.hpp"

namespace splitbranch {

// Supported sections: NAME, ROWS, COLUMNS (with INTORG/INTEND markers), RHS,
// BOUNDS (LO UP FX FR MI PL BV UI LI), ENDATA, and OBJSENSE MIN. Variables
// default to [0, inf) whether integer or not; only BV implies an upper bound
// of 1. Throws Error(kUnsupportedSection), Error(kMalformedRecord) or
// Error(kDuplicateEntry).
Milp parse_mps(std::string_view text);
Milp read_mps_file(const std::string& path);

// Unnamed variables and rows are written as C0001... and R0001...; values use
// %.17g so that parse_mps(write_mps(p)) == p.
std::string write_mps(const Milp& p);
void write_mps_file(const Milp& p, const std::string& path);

enum class Family { kKnapsack, kSetCover, kMixed };

std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct GeneratorParams {
  int num_vars = 8;       // columns (setcover: sets)
  int num_rows = 3;       // constraints (setcover: elements)
  int max_range = 5;      // integer variables range over at most max_range+1 values
  // When positive, integer ranges are shrunk until the integer grid has at
  // most this many points (keeps instances enumerable).
  double max_grid = 0.0;
  double continuous_fraction = 0.2;  // mixed only, rounded up
};

// Deterministic per (family, params, seed). Every instance is feasible and
// bounded. Throws Error(kInvalidParams) for sizes outside
// 1 <= num_vars <= 2000, 1 <= num_rows <= 2000, 1 <= max_range <= 1000.
Milp generate_instance(Family family, const GeneratorParams& params,
                       std::uint64_t seed);

struct ManifestEntry {
  std::string path;
  std::optional<double> optimal_objective;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

// Line format `<path> [optimal_objective]`; `#` starts a comment. A leading
// `# splitbranch-manifest v1` line carries the version tag.
struct InstanceManifest {
  std::string version = "1";
  std::vector<ManifestEntry> entries;

  friend bool operator==(const InstanceManifest&, const InstanceManifest&) = default;
};

// Throws Error(kMalformedRecord) for bad optima and Error(kDuplicateEntry) for
// repeated paths.
InstanceManifest parse_manifest(std::string_view text);
std::string write_manifest(const InstanceManifest& manifest);
// Relative paths are resolved against the manifest's directory.
InstanceManifest read_manifest_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace splitbranch

#endif  // SPLITBRANCH_IO_HPP_
