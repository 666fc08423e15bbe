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

#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "bbgky/cumulants.hpp"
#include "bbgky/hierarchy.hpp"
#include "bbgky/json_io.hpp"
#include "bbgky/partitions.hpp"
#include "bbgky/perturbation.hpp"
#include "bbgky/random.hpp"

namespace bbgky::cli {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path.string() + ": " + e.what());
  }
}

std::vector<int> iota_labels(int first, int count) {
  std::vector<int> v(static_cast<std::size_t>(std::max(count, 0)));
  std::iota(v.begin(), v.end(), first);
  return v;
}

}  // namespace

// --- Model ---------------------------------------------------------------------

SingleParticleModel ModelSpec::build() const {
  if (name == "free") return free_model(d);
  if (name == "ising") return ising_model(g, d);
  if (name == "random") return random_model(seed, d, g);
  if (name == "file") {
    const json j = read_json_file(path);
    if (!j.contains("K") || !j.contains("Phi")) throw ConfigError("model file needs \"K\" and \"Phi\"");
    SingleParticleModel model;
    try {
      model.K = operator_from_json(j.at("K"));
      model.Phi = operator_from_json(j.at("Phi"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("bad model matrix: ") + e.what());
    }
    model.d = model.K.d();
    if (model.K.n() != 1 || model.Phi.n() != 2 || model.Phi.d() != model.d) {
      throw ConfigError("model file: K must be one-particle and Phi two-particle on the same d");
    }
    try {
      model.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("model file: ") + e.what());
    }
    return model.with_coupling_scale(g);
  }
  throw ConfigError("unknown model '" + name + "'");
}

json ModelSpec::to_json() const {
  json j{{"name", name}, {"d", d}, {"g", g}};
  if (name == "random") j["seed"] = seed;
  if (name == "file") j["path"] = path;
  return j;
}

ModelSpec ModelSpec::parse(const json& j, const std::filesystem::path& base) {
  ModelSpec spec;
  if (j.is_string()) {
    // "free", "ising(0.5)", "random(7)"
    static const std::regex pattern(R"(^\s*(free|ising|random)\s*(?:\(\s*([^)]*)\))?\s*$)");
    std::smatch m;
    const std::string text = j.get<std::string>();
    if (!std::regex_match(text, m, pattern)) throw ConfigError("unknown model '" + text + "'");
    spec.name = m[1];
    if (spec.name == "free") spec.g = 0.0;
    if (m[2].matched && !m[2].str().empty()) {
      try {
        if (spec.name == "ising") spec.g = std::stod(m[2]);
        if (spec.name == "random") spec.seed = std::stoull(m[2]);
      } catch (const std::exception&) {
        throw ConfigError("bad model parameter in '" + text + "'");
      }
    }
    if (spec.name == "random") spec.g = 1.0;
    return spec;
  }
  if (!j.is_object()) throw ConfigError("model must be a string or an object");
  if (j.contains("file")) {
    spec.name = "file";
    const std::filesystem::path p = j.at("file").get<std::string>();
    spec.path = (p.is_absolute() ? p : base / p).string();
    spec.g = j.value("g", 1.0);
    return spec;
  }
  spec.name = j.value("name", std::string("ising"));
  spec.d = j.value("d", 2);
  if (spec.name == "free") spec.g = 0.0;
  if (spec.name == "random") spec.g = 1.0;
  spec.g = j.value("g", spec.g);
  spec.seed = j.value("seed", std::uint64_t{1});
  if (spec.name != "free" && spec.name != "ising" && spec.name != "random") {
    throw ConfigError("unknown model '" + spec.name + "'");
  }
  return spec;
}

// --- Tolerances -------------------------------------------------------------------

json RunTolerances::to_json() const {
  return {{"exact", exact},         {"noninteracting", noninteracting},
          {"ratio_low", ratio_low}, {"ratio_high", ratio_high},
          {"h", h},                 {"nodes", nodes},
          {"samples", samples},     {"gamma", gamma},
          {"perturbative_coupling", perturbative_coupling}};
}

void RunTolerances::apply(const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("tolerances must be an object");
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number()) throw ConfigError("tolerance '" + key + "' must be a number");
    if (key == "exact") exact = value.get<double>();
    else if (key == "noninteracting") noninteracting = value.get<double>();
    else if (key == "ratio_low") ratio_low = value.get<double>();
    else if (key == "ratio_high") ratio_high = value.get<double>();
    else if (key == "h") h = value.get<double>();
    else if (key == "nodes") nodes = value.get<int>();
    else if (key == "samples") samples = value.get<int>();
    else if (key == "gamma") gamma = value.get<double>();
    else if (key == "perturbative_coupling") perturbative_coupling = value.get<double>();
    else throw ConfigError("unknown tolerance '" + key + "'");
  }
}

// --- Config ------------------------------------------------------------------------

RunConfig RunConfig::parse(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"model",  "n_max",         "times",           "seed",
                                              "checks", "tolerances",    "output",          "initial_state",
                                              "scan",   "initial_observable", "allow_large"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("model")) c.model = ModelSpec::parse(j.at("model"), base);
    c.n_max = j.value("n_max", c.n_max);
    if (j.contains("times")) c.times = j.at("times").get<std::vector<double>>();
    c.seed = j.value("seed", c.seed);
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("tolerances")) c.tolerances.apply(j.at("tolerances"));
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    auto resolve = [&](const std::string& p) {
      const std::filesystem::path path = p;
      return path.is_absolute() ? path : base / path;
    };
    if (j.contains("initial_state")) c.initial_state = resolve(j.at("initial_state").get<std::string>());
    if (j.contains("initial_observable")) c.initial_observable = resolve(j.at("initial_observable").get<std::string>());
    c.allow_large = j.value("allow_large", false);
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      c.scan = ScanSpec{s.at("check").get<std::string>(), s.at("axis").get<std::string>(),
                        s.at("values").get<std::vector<double>>()};
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  return c;
}

void RunConfig::validate() const {
  if (n_max < 1) throw ConfigError("n_max must be at least 1");
  if (n_max > 4 && !allow_large) throw ConfigError("n_max > 4 needs --allow-large");
  if (n_max > 8) throw ConfigError("n_max > 8 is not supported");
  if (model.d < 2) throw ConfigError("model dimension d must be at least 2");
  if (times.empty()) throw ConfigError("times must not be empty");
  for (double t : times) {
    if (!std::isfinite(t)) throw ConfigError("times must be finite");
  }
  const auto& names = registered_checks();
  for (const auto& name : checks) {
    if (std::find(names.begin(), names.end(), name) == names.end()) throw ConfigError("unknown check '" + name + "'");
  }
  if (tolerances.nodes < 1 || tolerances.samples < 1) throw ConfigError("nodes and samples must be positive");
  if (!(tolerances.h > 0.0)) throw ConfigError("h must be positive");
  if (scan) {
    if (std::find(names.begin(), names.end(), scan->check) == names.end()) {
      throw ConfigError("unknown scan check '" + scan->check + "'");
    }
    static const std::vector<std::string> axes{"t", "g", "h", "nodes"};
    if (std::find(axes.begin(), axes.end(), scan->axis) == axes.end()) throw ConfigError("unknown scan axis '" + scan->axis + "'");
    if (scan->axis == "h" && scan->check != "hierarchy_residual") throw ConfigError("axis h applies to hierarchy_residual");
    if (scan->axis == "nodes" && scan->check != "perturbative") throw ConfigError("axis nodes applies to perturbative");
    if (scan->values.empty()) throw ConfigError("scan needs axis values");
  }
}

// --- Report ---------------------------------------------------------------------------

json Report::to_json(bool include_wall_time) const {
  json records = json::array();
  for (const auto& c : checks) {
    json r{{"name", c.name},           {"inputs_digest", c.inputs_digest}, {"value", c.value},
           {"reference", c.reference}, {"tolerance", c.tolerance},         {"pass", c.pass}};
    if (!c.flags.empty()) r["flags"] = c.flags;
    if (include_wall_time) r["wall_time"] = c.wall_time;
    records.push_back(std::move(r));
  }
  return {{"schema", 1}, {"checks", records}, {"pass", pass}};
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- Check context ---------------------------------------------------------------------

namespace {

struct Context {
  const RunConfig& config;
  const Dynamics& dyn;
  OperatorSequence D0;
  OperatorSequence A0;
  std::vector<std::string> flags;
};

struct Outcome {
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Table table;
};

Outcome max_below(double value, double tolerance, Table table) {
  return {value, 0.0, tolerance, value <= tolerance, std::move(table)};
}

// Ratio checks report the ratio farthest from the nominal 4.
Outcome ratio_outcome(const std::vector<double>& ratios, const RunTolerances& tol, Table table) {
  double worst = 4.0;
  bool pass = true;
  for (double r : ratios) {
    if (std::abs(r - 4.0) > std::abs(worst - 4.0) || !std::isfinite(r)) worst = r;
    pass = pass && std::isfinite(r) && r >= tol.ratio_low && r <= tol.ratio_high;
  }
  return {worst, 4.0, std::max(4.0 - tol.ratio_low, tol.ratio_high - 4.0), pass, std::move(table)};
}

Outcome check_stirling(const Context&) {
  Table table{{"s", "signed_identity", "alternating_subset_identity"}, {}};
  double worst = 0.0;
  for (int s = 1; s <= 8; ++s) {
    const auto a = signed_identity(s);
    const auto b = alternating_subset_identity(s);
    worst = std::max(worst, static_cast<double>(std::llabs(a - (s == 1 ? 1 : 0))));
    worst = std::max(worst, static_cast<double>(std::llabs(b - (s % 2 == 0 ? 1 : -1))));
    table.rows.push_back({double(s), double(a), double(b)});
  }
  return max_below(worst, 0.0, std::move(table));
}

Outcome check_noninteracting(const Context& ctx) {
  auto model = ctx.dyn.model();
  model.Phi = ManyBodyOperator::zero(2, model.d);
  const int top = std::min(4, ctx.config.n_max);
  const Dynamics free(model, std::max(top, 1));
  Table table{{"s", "t", "heisenberg", "von_neumann"}, {}};
  double worst = 0.0;
  for (int s = 2; s <= top; ++s) {
    for (double t : ctx.config.times) {
      const auto h = check_norm_bound(free, s, t, Direction::Heisenberg, ctx.config.seed, ctx.config.tolerances.samples);
      const auto v = check_norm_bound(free, s, t, Direction::VonNeumann, ctx.config.seed, ctx.config.tolerances.samples);
      worst = std::max({worst, h.max_ratio, v.max_ratio});
      table.rows.push_back({double(s), t, h.max_ratio, v.max_ratio});
    }
  }
  return max_below(worst, ctx.config.tolerances.noninteracting, std::move(table));
}

Outcome check_cluster_reconstruction(const Context& ctx) {
  std::mt19937_64 rng(ctx.config.seed);
  Table table{{"total", "t", "direction", "shapes", "max_relative_deviation"}, {}};
  double worst = 0.0;
  for (int total = 1; total <= ctx.config.n_max; ++total) {
    const auto shapes = enumerate_cluster_args(total);
    const auto target = random_hermitian(total, ctx.dyn.d(), rng);
    const auto all = iota_labels(1, total);
    for (double t : ctx.config.times) {
      for (Direction dir : {Direction::Heisenberg, Direction::VonNeumann}) {
        const auto exact = group_on(ctx.dyn, t, all, target, dir);
        double local = 0.0;
        for (const auto& args : shapes) {
          local = std::max(local, relative_deviation(cluster_expansion_rhs(ctx.dyn, t, args, target, dir), exact));
        }
        worst = std::max(worst, local);
        table.rows.push_back({double(total), t, dir == Direction::Heisenberg ? 0.0 : 1.0, double(shapes.size()), local});
      }
    }
  }
  return max_below(worst, ctx.config.tolerances.exact, std::move(table));
}

Outcome check_series_vs_direct(const Context& ctx) {
  const auto F0 = initial_reduced_density(ctx.D0);
  const auto B0 = initial_reduced_observables(ctx.A0);
  Table table{{"t", "s", "state_deviation", "observable_deviation"}, {}};
  double worst = 0.0;
  for (double t : ctx.config.times) {
    for (int s = 1; s <= ctx.config.n_max; ++s) {
      const double a = relative_deviation(reduced_density_series(ctx.dyn, t, F0, s),
                                          reduced_density_direct(ctx.dyn, t, ctx.D0, s));
      const double b = relative_deviation(reduced_observable_series(ctx.dyn, t, B0, s),
                                          reduced_observable_direct(ctx.dyn, t, ctx.A0, s));
      worst = std::max({worst, a, b});
      table.rows.push_back({t, double(s), a, b});
    }
  }
  return max_below(worst, ctx.config.tolerances.exact, std::move(table));
}

Outcome check_three_routes(const Context& ctx) {
  const auto F0 = initial_reduced_density(ctx.D0);
  Table table{{"t", "s", "series_vs_reduced", "series_vs_exponential", "reduced_vs_exponential"}, {}};
  double worst = 0.0;
  for (double t : ctx.config.times) {
    const auto rep = group_representation_density(ctx.dyn, t, F0);
    for (int s = 1; s <= ctx.config.n_max; ++s) {
      const auto se = reduced_density_series(ctx.dyn, t, F0, s);
      const auto rc = reduced_density_reduced_cumulants(ctx.dyn, t, F0, s);
      const double a = relative_deviation(se, rc);
      const double b = relative_deviation(se, rep[s]);
      const double c = relative_deviation(rc, rep[s]);
      worst = std::max({worst, a, b, c});
      table.rows.push_back({t, double(s), a, b, c});
    }
  }
  return max_below(worst, ctx.config.tolerances.exact, std::move(table));
}

// Residual floor below which a pair counts as exact.
constexpr double kExactResidual = 1e-11;

Outcome check_hierarchy(const Context& ctx) {
  const auto F0 = initial_reduced_density(ctx.D0);
  const auto B0 = initial_reduced_observables(ctx.A0);
  const double h = ctx.config.tolerances.h;
  Table table{{"t", "s", "kind", "h", "residual", "residual_half", "ratio"}, {}};
  std::vector<double> ratios;
  for (double t : ctx.config.times) {
    for (int s = 1; s <= std::min(3, ctx.config.n_max); ++s) {
      for (HierarchyKind kind : {HierarchyKind::Bbgky, HierarchyKind::Dual}) {
        const auto& initial = kind == HierarchyKind::Bbgky ? F0.seq : B0.seq;
        const double r1 = hierarchy_residual(ctx.dyn, kind, initial, t, s, h);
        const double r2 = hierarchy_residual(ctx.dyn, kind, initial, t, s, h / 2);
        const double ratio = (r1 < kExactResidual && r2 < kExactResidual) ? 4.0 : r1 / r2;
        ratios.push_back(ratio);
        table.rows.push_back({t, double(s), kind == HierarchyKind::Bbgky ? 0.0 : 1.0, h, r1, r2, ratio});
      }
    }
  }
  return ratio_outcome(ratios, ctx.config.tolerances, std::move(table));
}

double max_hierarchy_residual(const Context& ctx, double h) {
  const auto F0 = initial_reduced_density(ctx.D0);
  const auto B0 = initial_reduced_observables(ctx.A0);
  double worst = 0.0;
  for (double t : ctx.config.times) {
    for (int s = 1; s <= std::min(3, ctx.config.n_max); ++s) {
      worst = std::max(worst, hierarchy_residual(ctx.dyn, HierarchyKind::Bbgky, F0.seq, t, s, h));
      worst = std::max(worst, hierarchy_residual(ctx.dyn, HierarchyKind::Dual, B0.seq, t, s, h));
    }
  }
  return worst;
}

Outcome check_duality(const Context& ctx) {
  Table table{{"t", "gap", "identity_gap"}, {}};
  double worst = 0.0;
  const auto identity = OperatorSequence::identity(ctx.dyn.d(), ctx.config.n_max);
  for (double t : ctx.config.times) {
    const double gap = duality_gap(ctx.dyn, t, ctx.A0, ctx.D0);
    // Identity observable: unit mean at every t.
    const auto Bt = reduced_observable_sequence(ctx.dyn, t, initial_reduced_observables(identity));
    const double id_gap = std::abs(pair(Bt.seq, initial_reduced_density(ctx.D0).seq) - Complex(1.0));
    worst = std::max({worst, gap, id_gap});
    table.rows.push_back({t, gap, id_gap});
  }
  return max_below(worst, ctx.config.tolerances.exact, std::move(table));
}

Outcome check_norm_bounds(const Context& ctx) {
  Table table{{"kind", "s", "n", "t", "direction", "value", "bound"}, {}};
  double worst = 0.0;  // largest value / bound
  const int samples = ctx.config.tolerances.samples;
  auto record = [&](double kind, double s, double n, double t, double dir, double value, double bound) {
    worst = std::max(worst, value / bound);
    table.rows.push_back({kind, s, n, t, dir, value, bound});
  };
  for (double t : ctx.config.times) {
    for (Direction dir : {Direction::Heisenberg, Direction::VonNeumann}) {
      const double dcode = dir == Direction::Heisenberg ? 0.0 : 1.0;
      for (int s = 1; s <= ctx.config.n_max; ++s) {
        const auto r = check_norm_bound(ctx.dyn, s, t, dir, ctx.config.seed, samples);
        record(0, s, 0, t, dcode, r.max_ratio, r.bound);
        for (int n = 0; s + n <= ctx.config.n_max; ++n) {
          const auto c = check_clustered_norm_bound(ctx.dyn, s, n, t, dir, ctx.config.seed, samples);
          record(1, s, n, t, dcode, c.max_ratio, c.bound);
        }
      }
    }
    const double gamma = ctx.config.tolerances.gamma;
    const auto B0 = initial_reduced_observables(ctx.A0);
    const auto Bt = reduced_observable_sequence(ctx.dyn, t, B0);
    const double factor = std::exp(2.0) / (1.0 - gamma * std::exp(1.0));
    record(2, 0, 0, t, 0, seq_norm_gamma(Bt.seq, gamma), factor * seq_norm_gamma(B0.seq, gamma));
  }
  return {worst, 1.0, 0.0, worst <= 1.0, std::move(table)};
}

Outcome check_kary(const Context& ctx) {
  std::mt19937_64 rng(ctx.config.seed + 7);
  const int n_max = ctx.config.n_max;
  const int d = ctx.dyn.d();
  Table table{{"t", "k", "s", "deviation"}, {}};
  double worst = 0.0;
  bool exact_zero = true;
  for (double t : ctx.config.times) {
    for (int k = 1; k <= n_max; ++k) {
      const auto bk = symmetrize(random_hermitian(k, d, rng));
      std::vector<ManyBodyOperator> items;
      for (int n = 0; n <= n_max; ++n) items.push_back(n == k ? bk : ManyBodyOperator::zero(n, d));
      const ReducedObservables B0{OperatorSequence(d, std::move(items)), Provenance::Initial, 0.0};
      for (int s = 1; s <= n_max; ++s) {
        const auto general = reduced_observable_series(ctx.dyn, t, B0, s);
        const auto closed = k == 1 ? additive_observable_series(ctx.dyn, t, bk, s) : kary_observable_series(ctx.dyn, t, bk, s);
        double dev;
        if (s < k) {
          exact_zero = exact_zero && closed.mat().isZero(0.0);
          dev = frobenius_norm(general);
        } else {
          dev = relative_deviation(closed, general);
        }
        worst = std::max(worst, dev);
        table.rows.push_back({t, double(k), double(s), dev});
      }
    }
  }
  auto out = max_below(worst, ctx.config.tolerances.exact, std::move(table));
  out.pass = out.pass && exact_zero;
  return out;
}

struct PerturbativePoint {
  double deviation = 0.0;
  double second_norm = 0.0;
};

PerturbativePoint perturbative_point(const Context& ctx, double coupling, double t, int nodes) {
  const Dynamics scaled(ctx.dyn.model().with_coupling_scale(coupling), ctx.dyn.max_particles());
  const auto F0 = initial_reduced_density(ctx.D0);
  const auto r = first_order_report(scaled, t, F0, 1, nodes);
  return {r.deviation, r.second_norm};
}

Outcome check_perturbative(const Context& ctx) {
  const double eps = ctx.config.tolerances.perturbative_coupling;
  const int nodes = ctx.config.tolerances.nodes;
  Table table{{"t", "coupling", "deviation", "deviation_half", "second_order_norm", "ratio"}, {}};
  std::vector<double> ratios;
  for (double t : ctx.config.times) {
    const auto full = perturbative_point(ctx, eps, t, nodes);
    const auto half = perturbative_point(ctx, eps / 2, t, nodes);
    const double ratio =
        (full.deviation < kExactResidual && half.deviation < kExactResidual) ? 4.0 : full.deviation / half.deviation;
    ratios.push_back(ratio);
    table.rows.push_back({t, eps, full.deviation, half.deviation, full.second_norm, ratio});
  }
  return ratio_outcome(ratios, ctx.config.tolerances, std::move(table));
}

using CheckFn = std::function<Outcome(const Context&)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks{
      {"cluster_reconstruction", check_cluster_reconstruction},
      {"duality", check_duality},
      {"hierarchy_residual", check_hierarchy},
      {"kary_closed_forms", check_kary},
      {"noninteracting_cumulants", check_noninteracting},
      {"norm_bounds", check_norm_bounds},
      {"perturbative", check_perturbative},
      {"series_vs_direct", check_series_vs_direct},
      {"stirling_identity", check_stirling},
      {"three_routes", check_three_routes},
  };
  return checks;
}

// Initial data: seeded random sectors, or the supplied files truncated to
// n_max (flagged when sectors are dropped).
void load_initial_data(const RunConfig& config, int d, Context& ctx) {
  std::mt19937_64 rng_state(config.seed);
  std::mt19937_64 rng_obs(config.seed + 1);
  auto load = [&](const std::filesystem::path& path) {
    OperatorSequence seq;
    try {
      seq = sequence_from_json(read_json_file(path));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("bad initial data in " + path.string() + ": " + e.what());
    }
    if (seq.d() != d) throw ConfigError("initial data dimension does not match the model");
    if (seq.n_max() > config.n_max) ctx.flags.push_back("inexact_truncation");
    return seq.truncated(config.n_max);
  };
  ctx.D0 = config.initial_state ? load(*config.initial_state) : random_state_sequence(d, config.n_max, rng_state);
  ctx.A0 = config.initial_observable ? load(*config.initial_observable)
                                     : random_observable_sequence(d, config.n_max, rng_obs);
  if (config.initial_state) {
    try {
      checked_normalizer(ctx.D0);
    } catch (const DegenerateStateError& e) {
      throw ConfigError(std::string("initial state: ") + e.what());
    }
  }
}

std::string digest_for(const std::string& name, const RunConfig& config) {
  json j{{"check", name},
         {"model", config.model.to_json()},
         {"n_max", config.n_max},
         {"times", config.times},
         {"seed", config.seed},
         {"tolerances", config.tolerances.to_json()},
         {"initial_state", config.initial_state ? config.initial_state->string() : ""},
         {"initial_observable", config.initial_observable ? config.initial_observable->string() : ""}};
  return fnv1a_hex(j.dump());
}

}  // namespace

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

Report run(const RunConfig& config) {
  config.validate();
  const SingleParticleModel model = config.model.build();
  const Dynamics dyn(model, std::max(config.n_max, 1));
  Context ctx{config, dyn, {}, {}, {}};
  load_initial_data(config, model.d, ctx);

  std::vector<std::string> names = config.checks.empty() ? registered_checks() : config.checks;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::vector<std::future<CheckResult>> jobs;
  for (const auto& name : names) {
    jobs.push_back(std::async(std::launch::async, [&ctx, &config, name] {
      const auto start = std::chrono::steady_clock::now();
      const Outcome out = registry().at(name)(ctx);
      CheckResult r;
      r.name = name;
      r.inputs_digest = digest_for(name, config);
      r.value = out.value;
      r.reference = out.reference;
      r.tolerance = out.tolerance;
      r.pass = out.pass;
      r.flags = ctx.flags;
      r.table = out.table;
      r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return r;
    }));
  }
  Report report;
  report.pass = true;
  for (auto& job : jobs) {
    report.checks.push_back(job.get());
    report.pass = report.pass && report.checks.back().pass;
  }
  return report;
}

Table scan(const RunConfig& config, const ScanSpec& spec) {
  config.validate();
  Table table{{spec.axis, "value", "pass"}, {}};
  for (double v : spec.values) {
    RunConfig local = config;
    local.checks = {spec.check};
    local.scan.reset();
    if (spec.axis == "t") local.times = {v};
    if (spec.axis == "g") local.model.g = v;
    if (spec.axis == "nodes") local.tolerances.nodes = static_cast<int>(v);
    if (spec.axis == "h") {
      const SingleParticleModel model = local.model.build();
      const Dynamics dyn(model, local.n_max);
      Context ctx{local, dyn, {}, {}, {}};
      load_initial_data(local, model.d, ctx);
      const double residual = max_hierarchy_residual(ctx, v);
      table.rows.push_back({v, residual, std::isfinite(residual) ? 1.0 : 0.0});
      continue;
    }
    if (spec.axis == "nodes") {
      const SingleParticleModel model = local.model.build();
      const Dynamics dyn(model, local.n_max);
      Context ctx{local, dyn, {}, {}, {}};
      load_initial_data(local, model.d, ctx);
      const auto p = perturbative_point(ctx, local.tolerances.perturbative_coupling, local.times.front(),
                                        static_cast<int>(v));
      table.rows.push_back({v, p.deviation, p.deviation <= p.second_norm * 1.5 + kExactResidual ? 1.0 : 0.0});
      continue;
    }
    const auto report = run(local);
    table.rows.push_back({v, report.checks.front().value, report.checks.front().pass ? 1.0 : 0.0});
  }
  return table;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_outputs(const std::filesystem::path& dir, const Report& report, const std::optional<Table>& scan_table) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / "report.json");
  if (!out) throw ConfigError("cannot write report.json");
  out << report.to_json().dump(2) << '\n';
  for (const auto& c : report.checks) {
    if (!c.table.header.empty()) write_csv(dir / (c.name + ".csv"), c.table);
  }
  if (scan_table) write_csv(dir / "scan.csv", *scan_table);
}

}  // namespace bbgky::cli
