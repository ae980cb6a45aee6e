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

#include "helmrff/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

#include "helmrff/error.hpp"
#include "helmrff/serialize.hpp"

namespace helmrff {

namespace {

constexpr const char* kTestNote = "test MSE: vector-field error at noiseless test-trajectory states";

Hyperparameters fixed_helmholtz(const ExperimentConfig& config) {
  Hyperparameters h;
  h.sigma = KernelWidth(config.fixed->sigma);
  h.lambda1 = config.fixed->lambda1;
  h.lambda2 = config.fixed->lambda2;
  h.features = config.features;
  h.validate();
  return h;
}

Hyperparameters fixed_baseline(const ExperimentConfig& config) {
  Hyperparameters h = fixed_helmholtz(config);
  h.lambda1 = config.fixed->baseline_lambda.value_or(config.fixed->lambda1);
  h.lambda2 = h.lambda1;
  h.validate();
  return h;
}

EvalReport finish_report(EvalReport report, const ExperimentConfig& config, const char* model,
                         const Hyperparameters& hyper, std::uint64_t seed) {
  report.system = config.system.name();
  report.model = model;
  report.hyper = hyper;
  report.seeds = SeedSet::from_master(seed);
  report.features = hyper.features;
  report.notes = kTestNote;
  return report;
}

std::string fmt_sci(double v) {
  std::ostringstream s;
  s << std::setprecision(4) << std::scientific << v;
  return s.str();
}

std::string fmt_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Dataset simulate(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  return generate_dataset(config.system, config.training, {config.noise_std, SeedSet::from_master(seed).noise});
}

std::vector<Trajectory> clean_trajectories(const ExperimentConfig& config) {
  std::vector<Trajectory> runs;
  for (const auto& x0 : config.training.initial_conditions) {
    runs.push_back(integrate_rk4(config.system.vector_field(), x0, config.training.step, config.training.t_end,
                                 config.training.substeps));
  }
  return runs;
}

Dataset test_set(const ExperimentConfig& config) {
  return make_test_set(config.system, config.test_initial_condition, config.test_step, config.test_t_end,
                       config.test_substeps);
}

FittedPair fit_models(const ExperimentConfig& config, const Dataset& training, std::uint64_t seed) {
  config.validate();
  const SeedSet seeds = SeedSet::from_master(seed);
  Hyperparameters hh;
  Hyperparameters hb;
  double score_h = 0.0;
  double score_b = 0.0;
  const bool searched = !config.fixed.has_value();
  if (searched) {
    const auto cv_h = cross_validate_helmholtz(training, config.search, config.features, seeds.basis_curl_free,
                                               seeds.basis_symplectic, seeds.cv_shuffle);
    const auto cv_b =
        cross_validate_baseline(training, config.search, config.features, seeds.basis_baseline, seeds.cv_shuffle);
    hh = cv_h.best;
    hb = cv_b.best;
    score_h = cv_h.best_score;
    score_b = cv_b.best_score;
  } else {
    hh = fixed_helmholtz(config);
    hb = fixed_baseline(config);
  }
  return {fit_helmholtz(training, hh, seed), fit_baseline(training, hb, seed), searched, score_h, score_b};
}

EvalReport evaluate_helmholtz(const ExperimentConfig& config, const HelmholtzModel& model, const Dataset& training,
                              const Dataset& test, std::uint64_t seed) {
  return finish_report(evaluate_field(model.field(), training, test), config, "helmholtz", model.hyper(), seed);
}

EvalReport evaluate_baseline(const ExperimentConfig& config, const BaselineModel& model, const Dataset& training,
                             const Dataset& test, std::uint64_t seed) {
  return finish_report(evaluate_field(model.field(), training, test), config, "gaussian-separable", model.hyper(),
                       seed);
}

SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  Dataset training = simulate(config, seed);
  FittedPair models = fit_models(config, training, seed);
  const Dataset test = test_set(config);
  EvalReport h = evaluate_helmholtz(config, models.helmholtz, training, test, seed);
  EvalReport b = evaluate_baseline(config, models.baseline, training, test, seed);
  return {seed, std::move(training), std::move(models), std::move(h), std::move(b)};
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

ReproduceSummary reproduce(const ExperimentConfig& config) {
  config.validate();
  if (config.seeds == 0) throw InvalidArgument("seeds must be >= 1");
  ReproduceSummary summary;
  summary.runs.reserve(config.seeds);

  // Seeds are independent; run them in waves and collect in seed order.
  const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < config.seeds; start += workers) {
    std::vector<std::future<SeedOutcome>> wave;
    for (std::size_t k = start; k < std::min(config.seeds, start + workers); ++k) {
      const std::uint64_t seed = config.seed + k;
      wave.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                [&config, seed] { return run_seed(config, seed); }));
    }
    for (auto& f : wave) summary.runs.push_back(f.get());
  }

  std::vector<double> ht, hs, bt, bs;
  for (const auto& r : summary.runs) {
    ht.push_back(r.helmholtz.training_mse);
    hs.push_back(r.helmholtz.test_mse);
    bt.push_back(r.baseline.training_mse);
    bs.push_back(r.baseline.test_mse);
  }
  summary.median_helmholtz_train = median(ht);
  summary.median_helmholtz_test = median(hs);
  summary.median_baseline_train = median(bt);
  summary.median_baseline_test = median(bs);

  const auto& a = config.acceptance;
  auto fail = [&](const std::string& what, double value, const char* op, double bound) {
    summary.failures.push_back(what + " = " + fmt_sci(value) + ", required " + op + " " + fmt_sci(bound));
  };
  if (a.max_helmholtz_train_mse && !(summary.median_helmholtz_train <= *a.max_helmholtz_train_mse)) {
    fail("median Helmholtz train MSE", summary.median_helmholtz_train, "<=", *a.max_helmholtz_train_mse);
  }
  if (a.max_helmholtz_test_mse && !(summary.median_helmholtz_test <= *a.max_helmholtz_test_mse)) {
    fail("median Helmholtz test MSE", summary.median_helmholtz_test, "<=", *a.max_helmholtz_test_mse);
  }
  if (a.min_baseline_to_helmholtz_test_ratio &&
      !(summary.median_baseline_test >= *a.min_baseline_to_helmholtz_test_ratio * summary.median_helmholtz_test)) {
    fail("median baseline/Helmholtz test ratio", summary.median_baseline_test / summary.median_helmholtz_test, ">=",
         *a.min_baseline_to_helmholtz_test_ratio);
  }
  if (a.max_helmholtz_to_baseline_test_ratio &&
      !(summary.median_helmholtz_test <= *a.max_helmholtz_to_baseline_test_ratio * summary.median_baseline_test)) {
    fail("median Helmholtz/baseline test ratio", summary.median_helmholtz_test / summary.median_baseline_test, "<=",
         *a.max_helmholtz_to_baseline_test_ratio);
  }
  return summary;
}

nlohmann::json artifact_meta(const ExperimentConfig& config, std::optional<std::uint64_t> seed) {
  nlohmann::json meta{{"config", config_to_json(config)}};
  if (seed) {
    meta["seeds"] = to_json(SeedSet::from_master(*seed));
  } else {
    nlohmann::json all = nlohmann::json::array();
    for (std::size_t k = 0; k < config.seeds; ++k) all.push_back(to_json(SeedSet::from_master(config.seed + k)));
    meta["seeds"] = all;
  }
  return meta;
}

std::string summary_csv(const std::vector<EvalReport>& reports, const nlohmann::json* meta) {
  std::ostringstream out;
  if (meta) out << "# " << meta->dump() << '\n';
  out << "system,model,train_mse,test_mse,seed,d,sigma,lambda1,lambda2\n";
  for (const auto& r : reports) {
    out << r.system << ',' << r.model << ',' << fmt_full(r.training_mse) << ',' << fmt_full(r.test_mse) << ','
        << r.seeds.master << ',' << r.features << ',' << fmt_full(r.hyper.sigma.value()) << ','
        << fmt_full(r.hyper.lambda1) << ',' << fmt_full(r.hyper.lambda2) << '\n';
  }
  return out.str();
}

std::string summary_text(const ExperimentConfig& config, const ReproduceSummary& summary) {
  std::ostringstream out;
  out << "experiment " << config.experiment << " (" << config.system.name() << "), " << summary.runs.size()
      << " seeds from " << config.seed << ", d = " << config.features << "\n\n";
  out << std::left << std::setw(20) << "model" << std::right << std::setw(16) << "train MSE" << std::setw(16)
      << "test MSE" << '\n';
  out << std::left << std::setw(20) << "Gaussian separable" << std::right << std::setw(16)
      << fmt_sci(summary.median_baseline_train) << std::setw(16) << fmt_sci(summary.median_baseline_test) << '\n';
  out << std::left << std::setw(20) << "Helmholtz" << std::right << std::setw(16)
      << fmt_sci(summary.median_helmholtz_train) << std::setw(16) << fmt_sci(summary.median_helmholtz_test) << '\n';
  out << "(medians over seeds)\n";
  if (summary.passed()) {
    out << "acceptance: PASS\n";
  } else {
    out << "acceptance: FAIL\n";
    for (const auto& f : summary.failures) out << "  " << f << '\n';
  }
  return out.str();
}

std::string command_simulate(const ExperimentConfig& config, const std::filesystem::path& out, std::size_t* count) {
  const Dataset data = simulate(config, config.seed);
  const auto meta = artifact_meta(config, config.seed);
  write_text_file(out / "dataset.csv", dataset_csv(data, &meta));
  nlohmann::json doc = meta;
  doc["dataset"] = to_json(data);
  write_text_file(out / "dataset.json", doc.dump(2) + "\n");
  write_text_file(out / "trajectories.csv", trajectory_csv(clean_trajectories(config), &meta));
  if (count) *count = data.size();
  std::ostringstream msg;
  msg << "N = " << data.size() << " samples (" << config.training.initial_conditions.size()
      << " trajectories) written to " << out.string() << '\n';
  return msg.str();
}

std::string command_fit(const ExperimentConfig& config, const std::filesystem::path& dataset_path,
                        const std::filesystem::path& out) {
  const Dataset training = dataset_path.empty() ? simulate(config, config.seed) : load_dataset(dataset_path);
  const FittedPair models = fit_models(config, training, config.seed);
  const Dataset test = test_set(config);
  const EvalReport h = evaluate_helmholtz(config, models.helmholtz, training, test, config.seed);
  const EvalReport b = evaluate_baseline(config, models.baseline, training, test, config.seed);
  const auto meta = artifact_meta(config, config.seed);

  nlohmann::json hm = meta;
  hm["model"] = to_json(models.helmholtz);
  write_text_file(out / "helmholtz_model.json", hm.dump(2) + "\n");
  nlohmann::json bm = meta;
  bm["model"] = to_json(models.baseline);
  write_text_file(out / "baseline_model.json", bm.dump(2) + "\n");
  nlohmann::json rep = meta;
  rep["searched"] = models.searched;
  if (models.searched) {
    rep["cv_score"] = {{"helmholtz", models.helmholtz_cv_score}, {"gaussian-separable", models.baseline_cv_score}};
  }
  rep["reports"] = {to_json(h), to_json(b)};
  write_text_file(out / "fit_report.json", rep.dump(2) + "\n");

  std::ostringstream msg;
  msg << (models.searched ? "hyperparameters from grid search\n" : "fixed hyperparameters\n");
  for (const EvalReport* r : {&b, &h}) {
    msg << std::left << std::setw(20) << r->model << " sigma " << fmt_sci(r->hyper.sigma.value()) << "  lambda1 "
        << fmt_sci(r->hyper.lambda1) << "  lambda2 " << fmt_sci(r->hyper.lambda2) << "  train " << fmt_sci(r->training_mse)
        << "  test " << fmt_sci(r->test_mse) << '\n';
  }
  return msg.str();
}

std::string command_eval(const ExperimentConfig& config, const std::filesystem::path& model_dir,
                         const std::filesystem::path& out) {
  auto read_model = [](const std::filesystem::path& p) {
    try {
      return nlohmann::json::parse(read_text_file(p)).at("model");
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("malformed model file '" + p.string() + "': " + e.what(), 0);
    }
  };
  const HelmholtzModel helm = helmholtz_from_json(read_model(model_dir / "helmholtz_model.json"));
  const BaselineModel base = baseline_from_json(read_model(model_dir / "baseline_model.json"));
  require_dim(config.test_initial_condition.size(), helm.dim(), "model vs config state dimension");

  const Dataset training = simulate(config, config.seed);
  const Dataset test = test_set(config);
  const EvalReport h = evaluate_helmholtz(config, helm, training, test, config.seed);
  const EvalReport b = evaluate_baseline(config, base, training, test, config.seed);
  const auto meta = artifact_meta(config, config.seed);

  nlohmann::json rep = meta;
  rep["reports"] = {to_json(h), to_json(b)};
  write_text_file(out / "eval_report.json", rep.dump(2) + "\n");
  write_text_file(out / "summary.csv", summary_csv({b, h}, &meta));

  const auto& x0 = config.test_initial_condition;
  const double h_step = config.test_step;
  const double t_end = config.test_t_end;
  std::vector<Trajectory> rollouts{integrate_rk4(config.system.vector_field(), x0, h_step, t_end, config.test_substeps),
                                   rollout_model(base.field(), x0, h_step, t_end),
                                   rollout_model(helm.field(), x0, h_step, t_end)};
  nlohmann::json traj_meta = meta;
  traj_meta["traj_id"] = {"true", "gaussian-separable", "helmholtz"};
  write_text_file(out / "rollouts.csv", trajectory_csv(rollouts, &traj_meta));
  if (helm.dim() == 2) {
    write_text_file(out / "grid_helmholtz.csv",
                    grid_csv(stream_grid(helm.field(), config.grid, config.grid_resolution), &meta));
    write_text_file(out / "grid_baseline.csv",
                    grid_csv(stream_grid(base.field(), config.grid, config.grid_resolution), &meta));
  }

  std::ostringstream msg;
  for (const EvalReport* r : {&b, &h}) {
    msg << std::left << std::setw(20) << r->model << " train " << fmt_sci(r->training_mse) << "  test "
        << fmt_sci(r->test_mse) << '\n';
  }
  return msg.str();
}

std::string command_reproduce(const ExperimentConfig& config, const std::filesystem::path& out, bool* passed) {
  const ReproduceSummary summary = reproduce(config);
  const auto meta = artifact_meta(config, std::nullopt);

  std::vector<EvalReport> reports;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : summary.runs) {
    reports.push_back(r.baseline);
    reports.push_back(r.helmholtz);
    all.push_back(to_json(r.baseline));
    all.push_back(to_json(r.helmholtz));
  }
  write_text_file(out / "summary.csv", summary_csv(reports, &meta));
  const std::string text = summary_text(config, summary);
  write_text_file(out / "summary.txt", "# " + meta.dump() + "\n" + text);
  nlohmann::json rep = meta;
  rep["reports"] = all;
  rep["median"] = {{"helmholtz", {{"train_mse", summary.median_helmholtz_train}, {"test_mse", summary.median_helmholtz_test}}},
                   {"gaussian-separable",
                    {{"train_mse", summary.median_baseline_train}, {"test_mse", summary.median_baseline_test}}}};
  rep["passed"] = summary.passed();
  rep["failures"] = summary.failures;
  write_text_file(out / "reports.json", rep.dump(2) + "\n");

  // Figure panels come from the first seed.
  const SeedOutcome& first = summary.runs.front();
  const auto first_meta = artifact_meta(config, first.seed);
  if (config.test_initial_condition.size() == 2) {
    write_text_file(out / "grid_true.csv",
                    grid_csv(stream_grid(config.system.vector_field(), config.grid, config.grid_resolution), &first_meta));
    write_text_file(out / "grid_data.csv",
                    points_csv(first.training.states, first.training.derivatives, &first_meta));
    write_text_file(out / "grid_baseline.csv",
                    grid_csv(stream_grid(first.models.baseline.field(), config.grid, config.grid_resolution),
                             &first_meta));
    write_text_file(out / "grid_helmholtz.csv",
                    grid_csv(stream_grid(first.models.helmholtz.field(), config.grid, config.grid_resolution),
                             &first_meta));
  }
  if (passed) *passed = summary.passed();
  return text;
}

}  // namespace helmrff
