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
#include <span>
#include <vector>

#include "helmrff/dataset.hpp"
#include "helmrff/features.hpp"

namespace helmrff {

/// sigma is shared by both maps. lambda1 weights the dissipative (curl-free)
/// coefficients, lambda2 the symplectic ones. Baseline fits use lambda1 only.
struct Hyperparameters {
  KernelWidth sigma{1.0};
  double lambda1 = 1e-3;
  double lambda2 = 1e-3;
  std::size_t features = 200;

  void validate() const;
};

/// Diagnostics from the closed-form ridge solve.
struct SolveReport {
  bool used_dual = false;       // solved in the nN-dimensional sample space
  bool used_fallback = false;   // Cholesky failed; least-squares solver used
  double relative_residual = 0; // |(Phi Phi^T + N Lambda) xi - Phi X| / |Phi X|
};

/// Minimizes (1/N) |Phi^T xi - X|^2 + xi^T Lambda xi where Phi stacks the given
/// designs (each d_k x nN) vertically and Lambda is lambda_k on block k.
///
/// Solves the primal system (Phi Phi^T + N Lambda) xi = Phi X when sum d_k <= nN
/// and otherwise the equivalent sample-space system
/// (sum_k Phi_k^T Phi_k / lambda_k + N I) a = X, xi_k = Phi_k a / lambda_k.
Vector solve_ridge(std::span<const Matrix> designs, std::span<const double> lambdas,
                   const Vector& targets, std::size_t samples, SolveReport* report = nullptr);

/// Cholesky solve with one refinement step; falls back to a rank-revealing
/// least-squares solve (and sets *fallback) when the factorization fails.
Vector solve_spd(const Matrix& a, const Vector& b, bool* fallback = nullptr);

/// Same problem, always through the primal 2d x 2d system.
Vector solve_ridge_primal(std::span<const Matrix> designs, std::span<const double> lambdas,
                          const Vector& targets, std::size_t samples, SolveReport* report = nullptr);

/// (1/N) |Phi^T xi - X|^2 + sum_k lambda_k |xi_k|^2.
double ridge_objective(std::span<const Matrix> designs, std::span<const double> lambdas,
                       const Vector& targets, std::size_t samples, const Vector& coefficients);

/// [Phi_c; Phi_s]: 2d x nN, column block i holds Psi_c(x_i) over Psi_s(x_i).
Matrix assemble_design(const Dataset& dataset, const FeatureBasis& curl_free,
                       const FeatureBasis& symplectic);

struct Decomposition {
  Vector symplectic;
  Vector dissipative;
};

/// f(x) = Psi_c(x)^T alpha + Psi_s(x)^T beta.
class HelmholtzModel {
 public:
  HelmholtzModel(FeatureBasis curl_free, FeatureBasis symplectic, Vector alpha, Vector beta,
                 Hyperparameters hyper);

  Vector predict(const Vector& x) const;
  Decomposition decompose(const Vector& x) const;

  /// H(x) = -(1/sqrt d) sum_i beta_i cos(w_i^T x), so that J grad H = f_s.
  double hamiltonian(const Vector& x) const;
  Vector hamiltonian_gradient(const Vector& x) const;

  /// phi(x) = -(1/sqrt d) sum_i alpha_i cos(w_i^T x), so that grad phi = f_d.
  double dissipation_potential(const Vector& x) const;
  Vector dissipation_gradient(const Vector& x) const;

  VectorField field() const;

  const FeatureBasis& curl_free_basis() const noexcept { return curl_free_; }
  const FeatureBasis& symplectic_basis() const noexcept { return symplectic_; }
  const Vector& alpha() const noexcept { return alpha_; }
  const Vector& beta() const noexcept { return beta_; }
  const Hyperparameters& hyper() const noexcept { return hyper_; }
  std::size_t dim() const noexcept { return curl_free_.dim(); }

  /// Copy with coefficients negated; predicts -f(x).
  HelmholtzModel negated() const;

 private:
  FeatureBasis curl_free_;
  FeatureBasis symplectic_;
  Vector alpha_;
  Vector beta_;
  Hyperparameters hyper_;
};

/// f(x) = Psi_g(x)^T alpha with the Gaussian-separable map.
class BaselineModel {
 public:
  BaselineModel(FeatureBasis basis, Vector alpha, Hyperparameters hyper);

  Vector predict(const Vector& x) const;
  VectorField field() const;

  const FeatureBasis& basis() const noexcept { return basis_; }
  const Vector& alpha() const noexcept { return alpha_; }
  const Hyperparameters& hyper() const noexcept { return hyper_; }
  std::size_t dim() const noexcept { return basis_.dim(); }

 private:
  FeatureBasis basis_;
  Vector alpha_;
  Hyperparameters hyper_;
};

HelmholtzModel fit_helmholtz(const Dataset& dataset, const Hyperparameters& hyper,
                             const FeatureBasis& curl_free, const FeatureBasis& symplectic,
                             SolveReport* report = nullptr);

/// Samples both bases from seed (see SeedSet) and fits.
HelmholtzModel fit_helmholtz(const Dataset& dataset, const Hyperparameters& hyper, std::uint64_t seed,
                             SolveReport* report = nullptr);

BaselineModel fit_baseline(const Dataset& dataset, const Hyperparameters& hyper, const FeatureBasis& basis,
                           SolveReport* report = nullptr);
BaselineModel fit_baseline(const Dataset& dataset, const Hyperparameters& hyper, std::uint64_t seed,
                           SolveReport* report = nullptr);

struct KernelTerm {
  MatrixKernel kind;
  double weight;
};

/// Representer-form fit f(x) = sum_i K(x, x_i) a_i with K = sum_t weight_t K_t.
class ExactKernelModel {
 public:
  static constexpr std::size_t kMaxSamples = 200;

  ExactKernelModel(std::vector<KernelTerm> terms, KernelWidth width, Matrix anchors, Matrix coefficients);

  Vector predict(const Vector& x) const;
  Matrix kernel(const Vector& x, const Vector& z) const;
  VectorField field() const;

  const Matrix& anchors() const noexcept { return anchors_; }
  const Matrix& coefficients() const noexcept { return coefficients_; }
  KernelWidth width() const noexcept { return width_; }
  const std::vector<KernelTerm>& terms() const noexcept { return terms_; }

 private:
  std::vector<KernelTerm> terms_;
  KernelWidth width_;
  Matrix anchors_;
  Matrix coefficients_;  // row i = a_i
};

/// Solves sum_j K(x_i, x_j) a_j + N lambda a_i = xdot_i. Rejects N > kMaxSamples.
ExactKernelModel fit_exact_kernel(const Dataset& dataset, MatrixKernel kind, KernelWidth width,
                                  double lambda);

/// Exact counterpart of fit_helmholtz: kernel K_co / lambda1 + K_so / lambda2 with unit ridge.
ExactKernelModel fit_exact_helmholtz(const Dataset& dataset, KernelWidth width, double lambda1,
                                     double lambda2);

}  // namespace helmrff
