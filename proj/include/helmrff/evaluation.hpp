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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "helmrff/regression.hpp"
#include "helmrff/rng.hpp"
#include "helmrff/systems.hpp"

namespace helmrff {

/// (1/N) sum_i |f(x_i) - xdot_i|^2.
double vector_field_mse(const VectorField& field, const Dataset& dataset);

/// |f(x_i) - xdot_i|^2 per sample.
std::vector<double> squared_residuals(const VectorField& field, const Dataset& dataset);

/// Noiseless (x, f(x)) samples along a true-system trajectory, t = 0 included.
Dataset make_test_set(const SystemSpec& system, const Vector& x0, double h, double t_end,
                      std::size_t substeps = 25);

struct SearchSpace {
  std::vector<double> sigmas;
  std::vector<double> lambdas;  // used for lambda1, lambda2 and the baseline lambda
  std::size_t folds = 5;

  /// 10^lo ... 10^hi, `points` values evenly spaced in the exponent.
  static std::vector<double> log_grid(double lo_exp, double hi_exp, std::size_t points);

  /// Sorted, de-duplicated copy. Throws on empty grids or invalid values.
  SearchSpace normalized() const;
};

/// Validation folds of a seeded shuffle of 0..count-1, split into near-equal contiguous chunks.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t count, std::size_t folds, std::uint64_t seed);

struct CvResult {
  Hyperparameters best;
  double best_score = 0.0;        // mean validation MSE
  std::size_t evaluated = 0;      // grid points scored
};

/// Grid search over sigma x lambda1 x lambda2 with K-fold validation MSE. Bases are
/// sampled once per sigma from the given seeds, so fold fits and the final fit share
/// frequencies. Exact ties go to the larger lambda1, then lambda2, then sigma.
CvResult cross_validate_helmholtz(const Dataset& dataset, const SearchSpace& space, std::size_t features,
                                  std::uint64_t curl_free_seed, std::uint64_t symplectic_seed,
                                  std::uint64_t shuffle_seed);

/// Grid search over sigma x lambda for the Gaussian-separable baseline (lambda2 mirrors lambda1).
CvResult cross_validate_baseline(const Dataset& dataset, const SearchSpace& space, std::size_t features,
                                 std::uint64_t basis_seed, std::uint64_t shuffle_seed);

/// Helmholtz search with bases and shuffle derived from one seed via SeedSet.
Hyperparameters cross_validate(const Dataset& dataset, const SearchSpace& space, std::uint64_t seed,
                               std::size_t features = 200);

/// RK4 rollout of a learned (or true) field, one step per sample.
Trajectory rollout_model(const VectorField& field, const Vector& x0, double h, double t_end);

/// Axis-aligned box for planar grids.
struct GridBounds {
  double q_min = -1.0;
  double q_max = 1.0;
  double p_min = -1.0;
  double p_max = 1.0;
};

/// resolution^2 samples, q outer and p inner (row-major).
struct StreamGrid {
  Matrix points;
  Matrix values;
};

StreamGrid stream_grid(const VectorField& field, const GridBounds& bounds, std::size_t resolution);

struct EvalReport {
  std::string system;
  std::string model;
  double training_mse = 0.0;
  double test_mse = 0.0;
  std::vector<double> training_residuals;
  std::vector<double> test_residuals;
  Hyperparameters hyper;
  SeedSet seeds;
  std::size_t features = 0;
  std::string notes;
};

EvalReport evaluate_field(const VectorField& field, const Dataset& training, const Dataset& test);

}  // namespace helmrff
