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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "helmrff/helmrff.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitThreshold = 2;

struct Options {
  std::string config;
  std::string experiment;
  std::string data;
  std::string models;
  std::string out;
  std::string fixed;
  std::uint64_t seed = 0;
  std::size_t seeds = 0;
  double noise = -1.0;
  bool seed_set = false;
};

struct ConfigHandle {
  helmrff_config* ptr = nullptr;
  ~ConfigHandle() { helmrff_config_free(ptr); }
};

int fail(helmrff_status status) {
  std::cerr << "error: " << helmrff_last_error() << '\n';
  return status == HELMRFF_ERR_THRESHOLD ? kExitThreshold : kExitValidation;
}

void print_report(char* report) {
  if (report) {
    std::cout << report;
    helmrff_string_free(report);
  }
}

// --config accepts a file path or a bundled id (msd, pendulum).
helmrff_status load(const Options& opt, ConfigHandle& cfg) {
  std::string source = opt.config.empty() ? opt.experiment : opt.config;
  if (source.empty()) source = "msd";
  helmrff_status st = (std::filesystem::exists(source) || source.find('/') != std::string::npos ||
                       source.find('.') != std::string::npos)
                          ? helmrff_config_load(source.c_str(), &cfg.ptr)
                          : helmrff_config_builtin(source.c_str(), &cfg.ptr);
  if (st != HELMRFF_OK) return st;
  if (opt.seed_set && (st = helmrff_config_set_seed(cfg.ptr, opt.seed)) != HELMRFF_OK) return st;
  if (opt.seeds > 0 && (st = helmrff_config_set_seeds(cfg.ptr, opt.seeds)) != HELMRFF_OK) return st;
  if (opt.noise >= 0.0 && (st = helmrff_config_set_noise(cfg.ptr, opt.noise)) != HELMRFF_OK) return st;
  if (!opt.fixed.empty() && (st = helmrff_config_set_fixed_hypers(cfg.ptr, opt.fixed.c_str())) != HELMRFF_OK) {
    return st;
  }
  return HELMRFF_OK;
}

std::string out_dir(const Options& opt, const ConfigHandle& cfg) {
  return opt.out.empty() ? helmrff_config_output(cfg.ptr) : opt.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz random-feature regression of dissipative Hamiltonian vector fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", helmrff_version());

  Options opt;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "YAML config file or bundled id (msd, pendulum)");
    cmd->add_option("--seed", opt.seed, "Master seed")->each([&](const std::string&) { opt.seed_set = true; });
    cmd->add_option("--out", opt.out, "Output directory (default: config 'output')");
  };

  auto* simulate = app.add_subcommand("simulate", "Generate the noisy training set");
  common(simulate);
  simulate->add_option("--noise", opt.noise, "Override the noise standard deviation")->check(CLI::NonNegativeNumber);

  auto* fit = app.add_subcommand("fit", "Select hyperparameters and fit both models");
  common(fit);
  fit->add_option("--data", opt.data, "Training set (.csv or .json); simulated from the config when omitted")
      ->check(CLI::ExistingFile);
  fit->add_option("--fixed-hypers", opt.fixed, "Skip the search: sigma,lambda1,lambda2");

  auto* eval = app.add_subcommand("eval", "Evaluate fitted models on the test trajectory");
  common(eval);
  eval->add_option("--models", opt.models, "Directory holding helmholtz_model.json and baseline_model.json")
      ->check(CLI::ExistingDirectory);

  auto* reproduce = app.add_subcommand("reproduce", "Run the full multi-seed protocol and check thresholds");
  common(reproduce);
  reproduce->add_option("experiment", opt.experiment, "Bundled experiment id (msd, pendulum)");
  reproduce->add_option("--seeds", opt.seeds, "Number of master seeds")->check(CLI::PositiveNumber);
  reproduce->add_option("--fixed-hypers", opt.fixed, "Skip the search: sigma,lambda1,lambda2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  ConfigHandle cfg;
  if (const auto st = load(opt, cfg); st != HELMRFF_OK) return fail(st);
  const std::string out = out_dir(opt, cfg);
  char* report = nullptr;
  helmrff_status st = HELMRFF_OK;

  if (simulate->parsed()) {
    std::size_t count = 0;
    st = helmrff_cmd_simulate(cfg.ptr, out.c_str(), &count, &report);
  } else if (fit->parsed()) {
    st = helmrff_cmd_fit(cfg.ptr, opt.data.c_str(), out.c_str(), &report);
  } else if (eval->parsed()) {
    const std::string models = opt.models.empty() ? out : opt.models;
    st = helmrff_cmd_eval(cfg.ptr, models.c_str(), out.c_str(), &report);
  } else if (reproduce->parsed()) {
    st = helmrff_cmd_reproduce(cfg.ptr, out.c_str(), &report);
  }
  print_report(report);
  if (st != HELMRFF_OK) return fail(st);
  return kExitOk;
}
