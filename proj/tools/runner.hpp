// Copyright 2026 The bbgky Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbgky/dynamics.hpp"
#include "bbgky/tensorspace.hpp"

namespace bbgky::cli {

/// Raised for malformed configs, unknown check names and unreadable inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSpec {
  std::string name = "ising";  // free | ising | random | file
  double g = 0.5;
  int d = 2;
  std::uint64_t seed = 1;
  std::string path;

  SingleParticleModel build() const;
  nlohmann::json to_json() const;
  static ModelSpec parse(const nlohmann::json& j, const std::filesystem::path& base);
};

struct RunTolerances {
  double exact = 1e-9;           // series, routes, reconstruction, duality, closed forms
  double noninteracting = 1e-10;
  double ratio_low = 3.5;
  double ratio_high = 4.5;
  double h = 1e-3;
  int nodes = 16;
  int samples = 20;
  double gamma = 0.3;
  double perturbative_coupling = 0.1;  // Phi scale for the g -> g/2 ratio test

  nlohmann::json to_json() const;
  void apply(const nlohmann::json& overrides);
};

struct ScanSpec {
  std::string check;
  std::string axis;  // t | g | h | nodes
  std::vector<double> values;
};

struct RunConfig {
  ModelSpec model;
  int n_max = 3;
  std::vector<double> times{0.3, 1.0};
  std::uint64_t seed = 20240;
  std::vector<std::string> checks;
  RunTolerances tolerances;
  std::filesystem::path output = "bbgky_out";
  std::optional<std::filesystem::path> initial_state;
  std::optional<std::filesystem::path> initial_observable;
  std::optional<ScanSpec> scan;
  bool allow_large = false;

  static RunConfig parse(const nlohmann::json& j, const std::filesystem::path& base = ".");
  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CheckResult {
  std::string name;
  std::string inputs_digest;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_time = 0.0;
  std::vector<std::string> flags;
  Table table;
};

struct Report {
  std::vector<CheckResult> checks;  // sorted by name
  bool pass = false;

  /// Schema-1 JSON; wall times are the only nondeterministic field.
  nlohmann::json to_json(bool include_wall_time = true) const;
};

const std::vector<std::string>& registered_checks();

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Runs the requested checks (all registered ones when the list is empty) on
/// a worker pool and assembles the report in name order.
Report run(const RunConfig& config);

/// One row per axis value: axis value, check value, pass flag.
Table scan(const RunConfig& config, const ScanSpec& spec);

void write_csv(const std::filesystem::path& path, const Table& table);
/// Writes report.json, one CSV per check with a table, and scan.csv.
void write_outputs(const std::filesystem::path& dir, const Report& report, const std::optional<Table>& scan_table);

}  // namespace bbgky::cli
