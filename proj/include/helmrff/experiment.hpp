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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "helmrff/config.hpp"
#include "helmrff/evaluation.hpp"
#include "helmrff/regression.hpp"

namespace helmrff {

/// Noisy training set for one master seed.
Dataset simulate(const ExperimentConfig& config, std::uint64_t seed);

/// Noiseless training trajectories (one per initial condition) at the training step.
std::vector<Trajectory> clean_trajectories(const ExperimentConfig& config);

Dataset test_set(const ExperimentConfig& config);

struct FittedPair {
  HelmholtzModel helmholtz;
  BaselineModel baseline;
  bool searched = false;  // false when fixed hyperparameters were used
  double helmholtz_cv_score = 0.0;
  double baseline_cv_score = 0.0;
};

/// Selects hyperparameters (grid search unless config.fixed) and fits both models.
FittedPair fit_models(const ExperimentConfig& config, const Dataset& training, std::uint64_t seed);

struct SeedOutcome {
  std::uint64_t seed = 0;
  Dataset training;
  FittedPair models;
  EvalReport helmholtz;
  EvalReport baseline;
};

SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed);

EvalReport evaluate_helmholtz(const ExperimentConfig& config, const HelmholtzModel& model, const Dataset& training,
                              const Dataset& test, std::uint64_t seed);
EvalReport evaluate_baseline(const ExperimentConfig& config, const BaselineModel& model, const Dataset& training,
                             const Dataset& test, std::uint64_t seed);

struct ReproduceSummary {
  std::vector<SeedOutcome> runs;
  double median_helmholtz_train = 0.0;
  double median_helmholtz_test = 0.0;
  double median_baseline_train = 0.0;
  double median_baseline_test = 0.0;
  std::vector<std::string> failures;  // one line per violated threshold

  bool passed() const noexcept { return failures.empty(); }
};

/// Runs seeds config.seed, config.seed + 1, ... (config.seeds of them) and checks thresholds on medians.
ReproduceSummary reproduce(const ExperimentConfig& config);

double median(std::vector<double> values);

/// Provenance block embedded in every artifact.
nlohmann::json artifact_meta(const ExperimentConfig& config, std::optional<std::uint64_t> seed);

/// Aligned text table plus a threshold verdict.
std::string summary_text(const ExperimentConfig& config, const ReproduceSummary& summary);

/// system,model,train_mse,test_mse,seed,d,sigma,lambda1,lambda2 rows for the given reports.
std::string summary_csv(const std::vector<EvalReport>& reports, const nlohmann::json* meta);

// Command bodies. Each writes self-describing artifacts below `out` and returns a
// short human-readable report.

/// dataset.csv, dataset.json, trajectories.csv.
std::string command_simulate(const ExperimentConfig& config, const std::filesystem::path& out, std::size_t* count);

/// helmholtz_model.json, baseline_model.json, fit_report.json. Simulates when dataset_path is empty.
std::string command_fit(const ExperimentConfig& config, const std::filesystem::path& dataset_path,
                        const std::filesystem::path& out);

/// Reads the model files from model_dir; writes eval_report.json, summary.csv, rollout and grid CSVs.
std::string command_eval(const ExperimentConfig& config, const std::filesystem::path& model_dir,
                         const std::filesystem::path& out);

/// summary.csv, summary.txt, reports.json, grid_{true,data,baseline,helmholtz}.csv.
std::string command_reproduce(const ExperimentConfig& config, const std::filesystem::path& out, bool* passed);

}  // namespace helmrff
