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

#ifndef HELMRFF_HELMRFF_H
#define HELMRFF_HELMRFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HELMRFF_BUILDING_LIBRARY)
#    define HELMRFF_API __declspec(dllexport)
#  else
#    define HELMRFF_API __declspec(dllimport)
#  endif
#else
#  define HELMRFF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; details via helmrff_last_error(). */
typedef enum helmrff_status {
  HELMRFF_OK = 0,
  HELMRFF_ERR_INVALID_ARGUMENT = 1,
  HELMRFF_ERR_DIMENSION = 2,
  HELMRFF_ERR_NUMERICAL = 3,
  HELMRFF_ERR_PARSE = 4,
  HELMRFF_ERR_IO = 5,
  HELMRFF_ERR_THRESHOLD = 6, /* reproduce ran but an acceptance threshold failed */
  HELMRFF_ERR_INTERNAL = 7
} helmrff_status;

typedef struct helmrff_config helmrff_config;
typedef struct helmrff_dataset helmrff_dataset;
typedef struct helmrff_model helmrff_model;

/* Message for the last failure on the calling thread; "" if none. */
HELMRFF_API const char* helmrff_last_error(void);
HELMRFF_API const char* helmrff_version(void);
HELMRFF_API void helmrff_string_free(char* text);

/* ---- configuration ---- */

HELMRFF_API helmrff_status helmrff_config_load(const char* path, helmrff_config** out);
HELMRFF_API helmrff_status helmrff_config_parse(const char* yaml_text, helmrff_config** out);
/* id is "msd" or "pendulum". */
HELMRFF_API helmrff_status helmrff_config_builtin(const char* id, helmrff_config** out);
HELMRFF_API helmrff_status helmrff_config_set_seed(helmrff_config* config, uint64_t seed);
HELMRFF_API helmrff_status helmrff_config_set_seeds(helmrff_config* config, size_t count);
HELMRFF_API helmrff_status helmrff_config_set_noise(helmrff_config* config, double sigma);
/* "sigma,lambda1,lambda2" */
HELMRFF_API helmrff_status helmrff_config_set_fixed_hypers(helmrff_config* config, const char* text);
/* Resolved config as JSON; free with helmrff_string_free. */
HELMRFF_API helmrff_status helmrff_config_json(const helmrff_config* config, char** out);
HELMRFF_API const char* helmrff_config_output(const helmrff_config* config);
HELMRFF_API void helmrff_config_free(helmrff_config* config);

/* ---- datasets ---- */

HELMRFF_API helmrff_status helmrff_simulate(const helmrff_config* config, uint64_t seed, helmrff_dataset** out);
/* .csv or .json */
HELMRFF_API helmrff_status helmrff_dataset_load(const char* path, helmrff_dataset** out);
HELMRFF_API helmrff_status helmrff_dataset_create(const double* states, const double* derivatives, size_t count,
                                                  size_t dim, helmrff_dataset** out);
HELMRFF_API size_t helmrff_dataset_size(const helmrff_dataset* dataset);
HELMRFF_API size_t helmrff_dataset_dim(const helmrff_dataset* dataset);
/* Row-major count x dim copies; either pointer may be NULL. */
HELMRFF_API helmrff_status helmrff_dataset_copy(const helmrff_dataset* dataset, double* states, double* derivatives);
HELMRFF_API void helmrff_dataset_free(helmrff_dataset* dataset);

/* ---- models ---- */

/* Bases are sampled from the master seed; features is the per-map budget d. */
HELMRFF_API helmrff_status helmrff_fit_helmholtz(const helmrff_dataset* dataset, double sigma, double lambda1,
                                                 double lambda2, size_t features, uint64_t seed,
                                                 helmrff_model** out);
HELMRFF_API helmrff_status helmrff_fit_baseline(const helmrff_dataset* dataset, double sigma, double lambda,
                                                size_t features, uint64_t seed, helmrff_model** out);
HELMRFF_API helmrff_status helmrff_model_from_json(const char* text, helmrff_model** out);
HELMRFF_API helmrff_status helmrff_model_to_json(const helmrff_model* model, char** out);
HELMRFF_API int helmrff_model_is_helmholtz(const helmrff_model* model);
HELMRFF_API size_t helmrff_model_dim(const helmrff_model* model);
HELMRFF_API helmrff_status helmrff_model_predict(const helmrff_model* model, const double* x, size_t dim,
                                                 double* out);
/* Helmholtz models only. */
HELMRFF_API helmrff_status helmrff_model_decompose(const helmrff_model* model, const double* x, size_t dim,
                                                   double* symplectic, double* dissipative);
HELMRFF_API helmrff_status helmrff_model_hamiltonian(const helmrff_model* model, const double* x, size_t dim,
                                                     double* out);
HELMRFF_API helmrff_status helmrff_model_mse(const helmrff_model* model, const helmrff_dataset* dataset,
                                             double* out);
HELMRFF_API void helmrff_model_free(helmrff_model* model);

/* ---- commands ----
 * Each writes its artifacts under out_dir and, when report is non-NULL, a
 * human-readable summary the caller frees with helmrff_string_free. */

HELMRFF_API helmrff_status helmrff_cmd_simulate(const helmrff_config* config, const char* out_dir, size_t* count,
                                                char** report);
/* dataset_path may be NULL or "" to simulate from the config. */
HELMRFF_API helmrff_status helmrff_cmd_fit(const helmrff_config* config, const char* dataset_path,
                                           const char* out_dir, char** report);
HELMRFF_API helmrff_status helmrff_cmd_eval(const helmrff_config* config, const char* model_dir,
                                            const char* out_dir, char** report);
/* HELMRFF_ERR_THRESHOLD when the run completes but a threshold fails; artifacts are still written. */
HELMRFF_API helmrff_status helmrff_cmd_reproduce(const helmrff_config* config, const char* out_dir, char** report);

#ifdef __cplusplus
}
#endif

#endif /* HELMRFF_HELMRFF_H */
