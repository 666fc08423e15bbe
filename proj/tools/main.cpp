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

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace bbgky::cli;
  CLI::App app{"Cumulant-series verification runner"};
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> checks;
  bool allow_large = false;
  bool list = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides the config)");
  app.add_option("--seed", seed, "Seed for the random initial data");
  app.add_option("--check", checks, "Check to run (repeatable)");
  app.add_flag("--allow-large", allow_large, "Permit n_max above 4");
  app.add_flag("--list-checks", list, "Print the registered check names");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& name : registered_checks()) std::cout << name << '\n';
    return 0;
  }
  try {
    RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
      }
      config = RunConfig::parse(j, std::filesystem::path(config_path).parent_path());
    }
    if (seed) config.seed = *seed;
    if (!checks.empty()) config.checks = checks;
    if (allow_large) config.allow_large = true;
    if (const char* env = std::getenv("BBGKY_OUT_DIR"); env && *env) config.output = env;
    if (!out_dir.empty()) config.output = out_dir;

    const Report report = run(config);
    std::optional<Table> scan_table;
    if (config.scan) scan_table = scan(config, *config.scan);
    write_outputs(config.output, report, scan_table);

    for (const auto& c : report.checks) {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << "  reference=" << c.reference
                << "  tolerance=" << c.tolerance << '\n';
    }
    std::cout << (report.pass ? "all checks passed" : "some checks failed") << " -> " << config.output.string() << '\n';
    return report.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
