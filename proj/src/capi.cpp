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

#include "helmrff/helmrff.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <string>
#include <variant>

#include "helmrff/config.hpp"
#include "helmrff/error.hpp"
#include "helmrff/experiment.hpp"
#include "helmrff/serialize.hpp"

struct helmrff_config {
  helmrff::ExperimentConfig value;
};

struct helmrff_dataset {
  helmrff::Dataset value;
};

struct helmrff_model {
  std::variant<helmrff::HelmholtzModel, helmrff::BaselineModel> value;
};

namespace {

thread_local std::string last_error;

helmrff_status set_error(helmrff_status status, const std::string& message) {
  last_error = message;
  return status;
}

helmrff_status map_code(helmrff::ErrorCode code) {
  switch (code) {
    case helmrff::ErrorCode::InvalidArgument: return HELMRFF_ERR_INVALID_ARGUMENT;
    case helmrff::ErrorCode::DimensionMismatch: return HELMRFF_ERR_DIMENSION;
    case helmrff::ErrorCode::Numerical: return HELMRFF_ERR_NUMERICAL;
    case helmrff::ErrorCode::Parse: return HELMRFF_ERR_PARSE;
    case helmrff::ErrorCode::Io: return HELMRFF_ERR_IO;
  }
  return HELMRFF_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes. No exception crosses the C boundary.
template <typename Fn>
helmrff_status guard(Fn&& fn) noexcept {
  try {
    last_error.clear();
    return fn();
  } catch (const helmrff::Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HELMRFF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HELMRFF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(HELMRFF_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* name) {
  if (!p) throw helmrff::InvalidArgument(std::string(name) + " must not be NULL");
}

helmrff::Vector state(const double* x, size_t dim) {
  need(x, "x");
  return Eigen::Map<const helmrff::Vector>(x, static_cast<Eigen::Index>(dim));
}

void write_vec(const helmrff::Vector& v, double* out) {
  need(out, "output buffer");
  std::memcpy(out, v.data(), sizeof(double) * static_cast<size_t>(v.size()));
}

const helmrff::HelmholtzModel& helmholtz(const helmrff_model* model) {
  need(model, "model");
  const auto* h = std::get_if<helmrff::HelmholtzModel>(&model->value);
  if (!h) throw helmrff::InvalidArgument("operation requires a Helmholtz model");
  return *h;
}

helmrff::VectorField field_of(const helmrff_model* model) {
  return std::visit([](const auto& m) { return m.field(); }, model->value);
}

}  // namespace

extern "C" {

const char* helmrff_last_error(void) { return last_error.c_str(); }

const char* helmrff_version(void) { return "0.1.0"; }

void helmrff_string_free(char* text) { delete[] text; }

helmrff_status helmrff_config_load(const char* path, helmrff_config** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new helmrff_config{helmrff::load_config(path)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_parse(const char* yaml_text, helmrff_config** out) {
  return guard([&] {
    need(yaml_text, "yaml_text");
    need(out, "out");
    *out = new helmrff_config{helmrff::parse_config(yaml_text)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_builtin(const char* id, helmrff_config** out) {
  return guard([&] {
    need(id, "id");
    need(out, "out");
    *out = new helmrff_config{helmrff::builtin_config(id)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_set_seed(helmrff_config* config, uint64_t seed) {
  return guard([&] {
    need(config, "config");
    config->value.seed = seed;
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_set_seeds(helmrff_config* config, size_t count) {
  return guard([&] {
    need(config, "config");
    if (count == 0) throw helmrff::InvalidArgument("seeds must be >= 1");
    config->value.seeds = count;
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_set_noise(helmrff_config* config, double sigma) {
  return guard([&] {
    need(config, "config");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw helmrff::InvalidArgument("noise std must be finite and >= 0");
    config->value.noise_std = sigma;
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_set_fixed_hypers(helmrff_config* config, const char* text) {
  return guard([&] {
    need(config, "config");
    need(text, "text");
    config->value.fixed = helmrff::parse_fixed_hypers(text);
    config->value.validate();
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_config_json(const helmrff_config* config, char** out) {
  return guard([&] {
    need(config, "config");
    need(out, "out");
    *out = dup_string(helmrff::config_to_json(config->value).dump(2));
    return HELMRFF_OK;
  });
}

const char* helmrff_config_output(const helmrff_config* config) {
  return config ? config->value.output.c_str() : "";
}

void helmrff_config_free(helmrff_config* config) { delete config; }

helmrff_status helmrff_simulate(const helmrff_config* config, uint64_t seed, helmrff_dataset** out) {
  return guard([&] {
    need(config, "config");
    need(out, "out");
    *out = new helmrff_dataset{helmrff::simulate(config->value, seed)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_dataset_load(const char* path, helmrff_dataset** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new helmrff_dataset{helmrff::load_dataset(path)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_dataset_create(const double* states, const double* derivatives, size_t count, size_t dim,
                                      helmrff_dataset** out) {
  return guard([&] {
    need(states, "states");
    need(derivatives, "derivatives");
    need(out, "out");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto rows = static_cast<Eigen::Index>(count);
    const auto cols = static_cast<Eigen::Index>(dim);
    helmrff::Dataset d;
    d.states = Eigen::Map<const RowMajor>(states, rows, cols);
    d.derivatives = Eigen::Map<const RowMajor>(derivatives, rows, cols);
    d.validate();
    *out = new helmrff_dataset{std::move(d)};
    return HELMRFF_OK;
  });
}

size_t helmrff_dataset_size(const helmrff_dataset* dataset) { return dataset ? dataset->value.size() : 0; }

size_t helmrff_dataset_dim(const helmrff_dataset* dataset) { return dataset ? dataset->value.dim() : 0; }

helmrff_status helmrff_dataset_copy(const helmrff_dataset* dataset, double* states, double* derivatives) {
  return guard([&] {
    need(dataset, "dataset");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto& d = dataset->value;
    if (states) Eigen::Map<RowMajor>(states, d.states.rows(), d.states.cols()) = d.states;
    if (derivatives) Eigen::Map<RowMajor>(derivatives, d.derivatives.rows(), d.derivatives.cols()) = d.derivatives;
    return HELMRFF_OK;
  });
}

void helmrff_dataset_free(helmrff_dataset* dataset) { delete dataset; }

helmrff_status helmrff_fit_helmholtz(const helmrff_dataset* dataset, double sigma, double lambda1, double lambda2,
                                     size_t features, uint64_t seed, helmrff_model** out) {
  return guard([&] {
    need(dataset, "dataset");
    need(out, "out");
    helmrff::Hyperparameters h;
    h.sigma = helmrff::KernelWidth(sigma);
    h.lambda1 = lambda1;
    h.lambda2 = lambda2;
    h.features = features;
    *out = new helmrff_model{helmrff::fit_helmholtz(dataset->value, h, seed)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_fit_baseline(const helmrff_dataset* dataset, double sigma, double lambda, size_t features,
                                    uint64_t seed, helmrff_model** out) {
  return guard([&] {
    need(dataset, "dataset");
    need(out, "out");
    helmrff::Hyperparameters h;
    h.sigma = helmrff::KernelWidth(sigma);
    h.lambda1 = lambda;
    h.lambda2 = lambda;
    h.features = features;
    *out = new helmrff_model{helmrff::fit_baseline(dataset->value, h, seed)};
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_model_from_json(const char* text, helmrff_model** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw helmrff::ParseError(std::string("malformed model JSON: ") + e.what(), 0);
    }
    if (doc.contains("model")) doc = doc["model"];
    const std::string type = doc.value("type", "");
    if (type == "helmholtz") {
      *out = new helmrff_model{helmrff::helmholtz_from_json(doc)};
    } else {
      *out = new helmrff_model{helmrff::baseline_from_json(doc)};
    }
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_model_to_json(const helmrff_model* model, char** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    const auto doc = std::visit([](const auto& m) { return helmrff::to_json(m); }, model->value);
    *out = dup_string(doc.dump());
    return HELMRFF_OK;
  });
}

int helmrff_model_is_helmholtz(const helmrff_model* model) {
  return model && std::holds_alternative<helmrff::HelmholtzModel>(model->value) ? 1 : 0;
}

size_t helmrff_model_dim(const helmrff_model* model) {
  return model ? std::visit([](const auto& m) { return m.dim(); }, model->value) : 0;
}

helmrff_status helmrff_model_predict(const helmrff_model* model, const double* x, size_t dim, double* out) {
  return guard([&] {
    need(model, "model");
    const auto v = state(x, dim);
    write_vec(std::visit([&](const auto& m) { return m.predict(v); }, model->value), out);
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_model_decompose(const helmrff_model* model, const double* x, size_t dim, double* symplectic,
                                       double* dissipative) {
  return guard([&] {
    const auto parts = helmholtz(model).decompose(state(x, dim));
    write_vec(parts.symplectic, symplectic);
    write_vec(parts.dissipative, dissipative);
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_model_hamiltonian(const helmrff_model* model, const double* x, size_t dim, double* out) {
  return guard([&] {
    const double h = helmholtz(model).hamiltonian(state(x, dim));
    need(out, "out");
    *out = h;
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_model_mse(const helmrff_model* model, const helmrff_dataset* dataset, double* out) {
  return guard([&] {
    need(model, "model");
    need(dataset, "dataset");
    need(out, "out");
    *out = helmrff::vector_field_mse(field_of(model), dataset->value);
    return HELMRFF_OK;
  });
}

void helmrff_model_free(helmrff_model* model) { delete model; }

helmrff_status helmrff_cmd_simulate(const helmrff_config* config, const char* out_dir, size_t* count,
                                    char** report) {
  return guard([&] {
    need(config, "config");
    need(out_dir, "out_dir");
    const std::string text = helmrff::command_simulate(config->value, out_dir, count);
    if (report) *report = dup_string(text);
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_cmd_fit(const helmrff_config* config, const char* dataset_path, const char* out_dir,
                               char** report) {
  return guard([&] {
    need(config, "config");
    need(out_dir, "out_dir");
    const std::string text =
        helmrff::command_fit(config->value, dataset_path ? dataset_path : "", out_dir);
    if (report) *report = dup_string(text);
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_cmd_eval(const helmrff_config* config, const char* model_dir, const char* out_dir,
                                char** report) {
  return guard([&] {
    need(config, "config");
    need(model_dir, "model_dir");
    need(out_dir, "out_dir");
    const std::string text = helmrff::command_eval(config->value, model_dir, out_dir);
    if (report) *report = dup_string(text);
    return HELMRFF_OK;
  });
}

helmrff_status helmrff_cmd_reproduce(const helmrff_config* config, const char* out_dir, char** report) {
  return guard([&] {
    need(config, "config");
    need(out_dir, "out_dir");
    bool passed = false;
    const std::string text = helmrff::command_reproduce(config->value, out_dir, &passed);
    if (report) *report = dup_string(text);
    if (!passed) return set_error(HELMRFF_ERR_THRESHOLD, "acceptance threshold not met");
    return HELMRFF_OK;
  });
}

}  // extern "C"
