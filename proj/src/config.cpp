/*
 * Copyright 2026 The helmrff Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "helmrff/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "builtin_configs.hpp"
#include "helmrff/error.hpp"

namespace helmrff {

double parse_scalar_expression(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view rest = trim(text);
  if (rest.empty()) throw InvalidArgument("empty numeric expression");
  double sign = 1.0;
  if (rest.front() == '-' || rest.front() == '+') {
    if (rest.front() == '-') sign = -1.0;
    rest.remove_prefix(1);
  }
  double value = 1.0;
  char op = '*';
  while (true) {
    const auto cut = rest.find_first_of("*/");
    const std::string_view token = trim(rest.substr(0, cut));
    double factor = 0.0;
    if (token == "pi") {
      factor = std::numbers::pi;
    } else {
      const auto* end = token.data() + token.size();
      const auto [ptr, ec] = std::from_chars(token.data(), end, factor);
      if (token.empty() || ec != std::errc{} || ptr != end) {
        throw InvalidArgument("cannot read '" + std::string(text) + "' as a number");
      }
    }
    value = op == '*' ? value * factor : value / factor;
    if (cut == std::string_view::npos) break;
    op = rest[cut];
    rest.remove_prefix(cut + 1);
  }
  if (!std::isfinite(value)) throw InvalidArgument("'" + std::string(text) + "' is not finite");
  return sign * value;
}

FixedHypers parse_fixed_hypers(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    values.push_back(parse_scalar_expression(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (values.size() != 3) throw InvalidArgument("--fixed-hypers expects sigma,lambda1,lambda2");
  FixedHypers out{values[0], values[1], values[2], std::nullopt};
  KernelWidth::from_config(out.sigma);
  if (!(out.lambda1 > 0.0) || !(out.lambda2 > 0.0)) throw InvalidArgument("fixed lambdas must be positive");
  return out;
}

namespace {

std::size_t line_of(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) { throw ParseError(what, line_of(node)); }

void require_keys(const YAML::Node& map, const char* section, std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) fail(map, std::string("'") + section + "' must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(kv.first, "unknown key '" + key + "' in " + section);
    }
  }
}

YAML::Node child(const YAML::Node& map, const char* key, const char* section) {
  const YAML::Node node = map[key];
  if (!node) fail(map, std::string("missing key '") + key + "' in " + section);
  return node;
}

double number(const YAML::Node& node) {
  if (!node.IsScalar()) fail(node, "expected a number");
  try {
    return parse_scalar_expression(node.Scalar());
  } catch (const InvalidArgument& e) {
    fail(node, e.what());
  }
}

double number_or(const YAML::Node& map, const char* key, double fallback) {
  const YAML::Node node = map[key];
  return node ? number(node) : fallback;
}

std::size_t count(const YAML::Node& node) {
  const double v = number(node);
  if (v < 0.0 || v != std::floor(v) || v > 1e9) fail(node, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t seed_value(const YAML::Node& node) {
  if (!node.IsScalar()) fail(node, "expected an integer seed");
  std::uint64_t out = 0;
  const auto& s = node.Scalar();
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) fail(node, "expected an integer seed");
  return out;
}

bool boolean(const YAML::Node& node) {
  try {
    return node.as<bool>();
  } catch (const YAML::Exception&) {
    fail(node, "expected true or false");
  }
}

Vector vector_of(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() == 0) fail(node, "expected a non-empty list of numbers");
  Vector out(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(node[i]);
  return out;
}

std::pair<double, double> range_of(const YAML::Node& node) {
  const Vector v = vector_of(node);
  if (v.size() != 2 || !(v(1) > v(0))) fail(node, "expected an increasing [lo, hi] pair");
  return {v(0), v(1)};
}

std::vector<double> grid_of(const YAML::Node& node) {
  if (node.IsSequence()) {
    const Vector v = vector_of(node);
    return {v.data(), v.data() + v.size()};
  }
  require_keys(node, "search grid", {"min_exp", "max_exp", "points"});
  const double lo = number(child(node, "min_exp", "search grid"));
  const double hi = number(child(node, "max_exp", "search grid"));
  const std::size_t points = count(child(node, "points", "search grid"));
  if (points < 1) fail(node, "grid needs at least one point");
  return SearchSpace::log_grid(lo, hi, points);
}

// Wraps module-level validation so the error points at the section that failed.
template <typename Fn>
auto checked(const YAML::Node& node, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(node, e.what());
  }
}

SystemSpec parse_system(const YAML::Node& node) {
  if (!node.IsMap()) fail(node, "'system' must be a mapping");
  const auto name = child(node, "name", "system").as<std::string>();
  if (name == "msd") {
    require_keys(node, "system", {"name", "mass", "stiffness", "damping"});
    MsdParameters p;
    p.mass = number_or(node, "mass", p.mass);
    p.stiffness = number_or(node, "stiffness", p.stiffness);
    p.damping = number_or(node, "damping", p.damping);
    return checked(node, [&] { return SystemSpec::mass_spring_damper(p); });
  }
  if (name == "pendulum") {
    require_keys(node, "system", {"name", "mass", "length", "damping", "gravity"});
    PendulumParameters p;
    p.mass = number_or(node, "mass", p.mass);
    p.length = number_or(node, "length", p.length);
    p.damping = number_or(node, "damping", p.damping);
    p.gravity = number_or(node, "gravity", p.gravity);
    return checked(node, [&] { return SystemSpec::pendulum(p); });
  }
  fail(node["name"], "unknown system '" + name + "' (expected msd or pendulum)");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (training.initial_conditions.empty()) throw InvalidArgument("training needs at least one initial condition");
  for (const auto& ic : training.initial_conditions) {
    require_dim(2, static_cast<std::size_t>(ic.size()), "training initial condition");
  }
  require_dim(2, static_cast<std::size_t>(test_initial_condition.size()), "test initial condition");
  if (!(training.step > 0.0) || !(training.t_end >= training.step)) {
    throw InvalidArgument("training needs 0 < step <= t_end");
  }
  if (training.substeps < 1) throw InvalidArgument("training substeps must be >= 1");
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be >= 0");
  if (!(test_step > 0.0) || !(test_t_end >= test_step)) throw InvalidArgument("test needs 0 < step <= t_end");
  if (test_substeps < 1) throw InvalidArgument("test substeps must be >= 1");
  if (features < 1) throw InvalidArgument("model.features must be >= 1");
  if (features % 2 != 0) throw InvalidArgument("model.features must be divisible by the state dimension (2)");
  const auto space = search.normalized();
  if (fixed) {
    KernelWidth::from_config(fixed->sigma);
    if (!(fixed->lambda1 > 0.0) || !(fixed->lambda2 > 0.0)) throw InvalidArgument("fixed lambdas must be positive");
    if (fixed->baseline_lambda && !(*fixed->baseline_lambda > 0.0)) {
      throw InvalidArgument("fixed baseline_lambda must be positive");
    }
  }
  if (seeds < 1) throw InvalidArgument("seeds must be >= 1");
  if (grid_resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
  if (!(grid.q_max > grid.q_min) || !(grid.p_max > grid.p_min)) throw InvalidArgument("grid bounds must increase");
  const std::size_t per_run =
      static_cast<std::size_t>(std::floor(training.t_end / training.step + 1e-9)) + (training.include_t0 ? 1 : 0);
  if (!fixed && per_run * training.initial_conditions.size() < space.folds) {
    throw InvalidArgument("training set is smaller than the number of folds");
  }
}

namespace {
ExperimentConfig parse_document(std::string_view yaml_text);
}  // namespace

ExperimentConfig parse_config(std::string_view yaml_text) {
  try {
    return parse_document(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0);
  }
}

namespace {

ExperimentConfig parse_document(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0);
  }
  if (!root || !root.IsMap()) throw ParseError("config must be a YAML mapping", 1);
  require_keys(root, "config",
               {"experiment", "system", "training", "test", "model", "search", "fixed", "seed", "seeds", "output",
                "grid", "acceptance"});

  ExperimentConfig cfg;
  cfg.experiment = child(root, "experiment", "config").as<std::string>();
  cfg.system = parse_system(child(root, "system", "config"));

  const YAML::Node training = child(root, "training", "config");
  require_keys(training, "training", {"initial_conditions", "step", "t_end", "include_t0", "substeps", "noise_std"});
  const YAML::Node ics = child(training, "initial_conditions", "training");
  if (!ics.IsSequence() || ics.size() == 0) fail(ics, "initial_conditions must be a non-empty list");
  for (const auto& ic : ics) {
    Vector x = vector_of(ic);
    if (x.size() != 2) fail(ic, "initial conditions must be [q, p]");
    cfg.training.initial_conditions.push_back(std::move(x));
  }
  cfg.training.step = number(child(training, "step", "training"));
  cfg.training.t_end = number(child(training, "t_end", "training"));
  if (training["include_t0"]) cfg.training.include_t0 = boolean(training["include_t0"]);
  if (training["substeps"]) cfg.training.substeps = count(training["substeps"]);
  cfg.noise_std = number_or(training, "noise_std", 0.0);
  if (!(cfg.training.step > 0.0)) fail(training["step"], "step must be positive");
  if (!(cfg.training.t_end >= cfg.training.step)) fail(training["t_end"], "t_end must be at least one step");
  if (cfg.training.substeps < 1) fail(training["substeps"], "substeps must be >= 1");
  if (!(cfg.noise_std >= 0.0)) fail(training["noise_std"], "noise_std must be >= 0");

  const YAML::Node test = child(root, "test", "config");
  require_keys(test, "test", {"initial_condition", "step", "t_end", "substeps"});
  cfg.test_initial_condition = vector_of(child(test, "initial_condition", "test"));
  cfg.test_step = number(child(test, "step", "test"));
  cfg.test_t_end = number(child(test, "t_end", "test"));
  if (test["substeps"]) cfg.test_substeps = count(test["substeps"]);
  if (cfg.test_initial_condition.size() != 2) fail(test["initial_condition"], "initial condition must be [q, p]");
  if (!(cfg.test_step > 0.0)) fail(test["step"], "step must be positive");
  if (!(cfg.test_t_end >= cfg.test_step)) fail(test["t_end"], "t_end must be at least one step");
  if (cfg.test_substeps < 1) fail(test["substeps"], "substeps must be >= 1");

  if (const YAML::Node model = root["model"]) {
    require_keys(model, "model", {"features"});
    if (model["features"]) cfg.features = count(model["features"]);
    if (cfg.features < 2 || cfg.features % 2 != 0) fail(model["features"], "features must be a positive even number");
  }

  cfg.search.sigmas = SearchSpace::log_grid(-1, 1, 13);
  cfg.search.lambdas = SearchSpace::log_grid(-8, 0, 17);
  if (const YAML::Node search = root["search"]) {
    require_keys(search, "search", {"folds", "sigma", "lambda"});
    if (search["folds"]) cfg.search.folds = count(search["folds"]);
    if (search["sigma"]) cfg.search.sigmas = grid_of(search["sigma"]);
    if (search["lambda"]) cfg.search.lambdas = grid_of(search["lambda"]);
    checked(search, [&] { return cfg.search.normalized(); });
  }

  if (const YAML::Node fixed = root["fixed"]) {
    require_keys(fixed, "fixed", {"sigma", "lambda1", "lambda2", "baseline_lambda"});
    FixedHypers f;
    f.sigma = number(child(fixed, "sigma", "fixed"));
    f.lambda1 = number(child(fixed, "lambda1", "fixed"));
    f.lambda2 = number(child(fixed, "lambda2", "fixed"));
    if (fixed["baseline_lambda"]) f.baseline_lambda = number(fixed["baseline_lambda"]);
    checked(fixed, [&] { return KernelWidth::from_config(f.sigma); });
    cfg.fixed = f;
  }

  if (root["seed"]) cfg.seed = seed_value(root["seed"]);
  if (root["seeds"]) cfg.seeds = count(root["seeds"]);
  if (cfg.seeds < 1) fail(root["seeds"], "seeds must be >= 1");
  if (root["output"]) cfg.output = root["output"].as<std::string>();

  if (const YAML::Node grid = root["grid"]) {
    require_keys(grid, "grid", {"q", "p", "resolution"});
    if (grid["q"]) std::tie(cfg.grid.q_min, cfg.grid.q_max) = range_of(grid["q"]);
    if (grid["p"]) std::tie(cfg.grid.p_min, cfg.grid.p_max) = range_of(grid["p"]);
    if (grid["resolution"]) cfg.grid_resolution = count(grid["resolution"]);
    if (cfg.grid_resolution < 2) fail(grid["resolution"], "resolution must be >= 2");
  }

  if (const YAML::Node acc = root["acceptance"]) {
    require_keys(acc, "acceptance",
                 {"max_helmholtz_train_mse", "max_helmholtz_test_mse", "min_baseline_to_helmholtz_test_ratio",
                  "max_helmholtz_to_baseline_test_ratio"});
    auto opt = [&](const char* key, std::optional<double>& out) {
      if (acc[key]) out = number(acc[key]);
    };
    opt("max_helmholtz_train_mse", cfg.acceptance.max_helmholtz_train_mse);
    opt("max_helmholtz_test_mse", cfg.acceptance.max_helmholtz_test_mse);
    opt("min_baseline_to_helmholtz_test_ratio", cfg.acceptance.min_baseline_to_helmholtz_test_ratio);
    opt("max_helmholtz_to_baseline_test_ratio", cfg.acceptance.max_helmholtz_to_baseline_test_ratio);
  }

  checked(root, [&] {
    cfg.validate();
    return 0;
  });
  return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string_view builtin_config_text(std::string_view id) {
  if (id == "msd") return builtin::kMsdConfig;
  if (id == "pendulum") return builtin::kPendulumConfig;
  throw InvalidArgument("unknown experiment '" + std::string(id) + "' (expected msd or pendulum)");
}

ExperimentConfig builtin_config(std::string_view id) { return parse_config(builtin_config_text(id)); }

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  using nlohmann::json;
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json system;
  system["name"] = cfg.system.name();
  if (const auto* p = std::get_if<MsdParameters>(&cfg.system.parameters())) {
    system["mass"] = p->mass;
    system["stiffness"] = p->stiffness;
    system["damping"] = p->damping;
  } else {
    const auto& q = std::get<PendulumParameters>(cfg.system.parameters());
    system["mass"] = q.mass;
    system["length"] = q.length;
    system["damping"] = q.damping;
    system["gravity"] = q.gravity;
  }
  json ics = json::array();
  for (const auto& ic : cfg.training.initial_conditions) ics.push_back(vec(ic));
  json out;
  out["experiment"] = cfg.experiment;
  out["system"] = system;
  out["training"] = {{"initial_conditions", ics},
                     {"step", cfg.training.step},
                     {"t_end", cfg.training.t_end},
                     {"include_t0", cfg.training.include_t0},
                     {"substeps", cfg.training.substeps},
                     {"noise_std", cfg.noise_std}};
  out["test"] = {{"initial_condition", vec(cfg.test_initial_condition)},
                 {"step", cfg.test_step},
                 {"t_end", cfg.test_t_end},
                 {"substeps", cfg.test_substeps}};
  out["model"] = {{"features", cfg.features}};
  out["search"] = {{"folds", cfg.search.folds}, {"sigma", cfg.search.sigmas}, {"lambda", cfg.search.lambdas}};
  if (cfg.fixed) {
    out["fixed"] = {{"sigma", cfg.fixed->sigma}, {"lambda1", cfg.fixed->lambda1}, {"lambda2", cfg.fixed->lambda2}};
    if (cfg.fixed->baseline_lambda) out["fixed"]["baseline_lambda"] = *cfg.fixed->baseline_lambda;
  }
  out["seed"] = cfg.seed;
  out["seeds"] = cfg.seeds;
  out["output"] = cfg.output;
  out["grid"] = {{"q", {cfg.grid.q_min, cfg.grid.q_max}},
                 {"p", {cfg.grid.p_min, cfg.grid.p_max}},
                 {"resolution", cfg.grid_resolution}};
  json acc = json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) acc[key] = *v;
  };
  put("max_helmholtz_train_mse", cfg.acceptance.max_helmholtz_train_mse);
  put("max_helmholtz_test_mse", cfg.acceptance.max_helmholtz_test_mse);
  put("min_baseline_to_helmholtz_test_ratio", cfg.acceptance.min_baseline_to_helmholtz_test_ratio);
  put("max_helmholtz_to_baseline_test_ratio", cfg.acceptance.max_helmholtz_to_baseline_test_ratio);
  out["acceptance"] = acc;
  return out;
}

}  // namespace helmrff
