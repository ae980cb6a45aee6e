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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "helmrff/evaluation.hpp"
#include "helmrff/systems.hpp"

namespace helmrff {

/// Hyperparameters that bypass the grid search. The baseline uses baseline_lambda,
/// or lambda1 when unset.
struct FixedHypers {
  double sigma = 1.0;
  double lambda1 = 1e-3;
  double lambda2 = 1e-3;
  std::optional<double> baseline_lambda;
};

/// Parses "sigma,lambda1,lambda2" (the --fixed-hypers flag).
FixedHypers parse_fixed_hypers(std::string_view text);

/// Pass/fail thresholds checked by `reproduce` against medians over seeds.
struct AcceptanceThresholds {
  std::optional<double> max_helmholtz_train_mse;
  std::optional<double> max_helmholtz_test_mse;
  std::optional<double> min_baseline_to_helmholtz_test_ratio;
  std::optional<double> max_helmholtz_to_baseline_test_ratio;
};

struct ExperimentConfig {
  std::string experiment;
  SystemSpec system = SystemSpec::mass_spring_damper();
  SamplingProtocol training;
  double noise_std = 0.0;
  Vector test_initial_condition;
  double test_step = 0.1;
  double test_t_end = 20.0;
  std::size_t test_substeps = 25;
  std::size_t features = 200;
  SearchSpace search;
  std::optional<FixedHypers> fixed;
  std::uint64_t seed = 0;
  std::size_t seeds = 10;
  std::string output = "out";
  GridBounds grid;
  std::size_t grid_resolution = 21;
  AcceptanceThresholds acceptance;

  /// Module-level preconditions; throws InvalidArgument.
  void validate() const;
};

/// Parses a YAML experiment description. Errors carry the 1-based line of the offending node.
ExperimentConfig parse_config(std::string_view yaml_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The bundled configs ("msd", "pendulum"), identical to configs/<id>.yaml.
std::string_view builtin_config_text(std::string_view id);
ExperimentConfig builtin_config(std::string_view id);

/// Fully resolved config, embedded in every output artifact.
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Evaluates a number written as a product/quotient of literals and `pi`, e.g. "19*pi/20".
double parse_scalar_expression(std::string_view text);

}  // namespace helmrff
