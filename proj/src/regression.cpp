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

#include "helmrff/regression.hpp"

#include <cmath>
#include <string>

#include "helmrff/error.hpp"
#include "helmrff/rng.hpp"

namespace helmrff {

void Hyperparameters::validate() const {
  if (!(lambda1 > 0.0) || !std::isfinite(lambda1)) {
    throw InvalidArgument("lambda1 must be positive, got " + std::to_string(lambda1));
  }
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) {
    throw InvalidArgument("lambda2 must be positive, got " + std::to_string(lambda2));
  }
  if (features < 1) throw InvalidArgument("feature budget d must be >= 1");
}

Vector solve_spd(const Matrix& a, const Vector& b, bool* fallback) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    Vector x = llt.solve(b);
    const Vector r = b - a * x;
    x += llt.solve(r);
    if (x.allFinite()) return x;
  }
  if (fallback) *fallback = true;
  return a.completeOrthogonalDecomposition().solve(b);
}

namespace {

constexpr double kMaxAcceptedResidual = 1e-6;

void check_ridge_inputs(std::span<const Matrix> designs, std::span<const double> lambdas,
                        const Vector& targets, std::size_t samples) {
  if (designs.empty() || designs.size() != lambdas.size()) {
    throw InvalidArgument("ridge solve needs one lambda per design block");
  }
  if (samples < 1) throw InvalidArgument("ridge solve needs at least one sample");
  for (std::size_t k = 0; k < designs.size(); ++k) {
    require_dim(static_cast<std::size_t>(targets.size()), static_cast<std::size_t>(designs[k].cols()),
                "ridge design columns");
    if (!(lambdas[k] > 0.0)) throw InvalidArgument("ridge weights must be positive");
  }
  if (targets.size() % static_cast<Eigen::Index>(samples) != 0) {
    throw DimensionMismatch("target length is not a multiple of the sample count");
  }
}

Eigen::Index total_rows(std::span<const Matrix> designs) {
  Eigen::Index rows = 0;
  for (const auto& d : designs) rows += d.rows();
  return rows;
}

Vector fitted_values(std::span<const Matrix> designs, const Vector& xi) {
  Vector fitted = Vector::Zero(designs.front().cols());
  Eigen::Index offset = 0;
  for (const auto& d : designs) {
    fitted.noalias() += d.transpose() * xi.segment(offset, d.rows());
    offset += d.rows();
  }
  return fitted;
}

double primal_relative_residual(std::span<const Matrix> designs, std::span<const double> lambdas,
                                const Vector& targets, std::size_t samples, const Vector& xi) {
  const Vector misfit = fitted_values(designs, xi) - targets;
  const double count = static_cast<double>(samples);
  double residual_sq = 0.0;
  double rhs_sq = 0.0;
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < designs.size(); ++k) {
    const auto& d = designs[k];
    const Vector r = d * misfit + count * lambdas[k] * xi.segment(offset, d.rows());
    residual_sq += r.squaredNorm();
    rhs_sq += (d * targets).squaredNorm();
    offset += d.rows();
  }
  return rhs_sq > 0.0 ? std::sqrt(residual_sq / rhs_sq) : std::sqrt(residual_sq);
}

void finish_report(std::span<const Matrix> designs, std::span<const double> lambdas, const Vector& targets,
                   std::size_t samples, const Vector& xi, SolveReport& report) {
  if (!xi.allFinite()) throw NumericalError("ridge solve produced non-finite coefficients");
  report.relative_residual = primal_relative_residual(designs, lambdas, targets, samples, xi);
  if (!(report.relative_residual <= kMaxAcceptedResidual)) {
    throw NumericalError("ridge system is numerically singular (relative residual " +
                         std::to_string(report.relative_residual) + ")");
  }
}

}  // namespace

Vector solve_ridge_primal(std::span<const Matrix> designs, std::span<const double> lambdas,
                          const Vector& targets, std::size_t samples, SolveReport* report) {
  check_ridge_inputs(designs, lambdas, targets, samples);
  const Eigen::Index rows = total_rows(designs);
  Matrix phi(rows, targets.size());
  Vector penalties(rows);
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < designs.size(); ++k) {
    phi.middleRows(offset, designs[k].rows()) = designs[k];
    penalties.segment(offset, designs[k].rows()).setConstant(lambdas[k]);
    offset += designs[k].rows();
  }
  Matrix system = phi * phi.transpose();
  system.diagonal() += static_cast<double>(samples) * penalties;
  SolveReport local;
  const Vector xi = solve_spd(system, phi * targets, &local.used_fallback);
  finish_report(designs, lambdas, targets, samples, xi, local);
  if (report) *report = local;
  return xi;
}

Vector solve_ridge(std::span<const Matrix> designs, std::span<const double> lambdas, const Vector& targets,
                   std::size_t samples, SolveReport* report) {
  check_ridge_inputs(designs, lambdas, targets, samples);
  if (total_rows(designs) <= targets.size()) {
    return solve_ridge_primal(designs, lambdas, targets, samples, report);
  }
  // Push-through identity: (Phi Phi^T + N Lambda)^-1 Phi = Lambda^-1 Phi (Phi^T Lambda^-1 Phi + N I)^-1.
  Matrix system = Matrix::Zero(targets.size(), targets.size());
  for (std::size_t k = 0; k < designs.size(); ++k) {
    system.noalias() += (designs[k].transpose() * designs[k]) / lambdas[k];
  }
  system.diagonal().array() += static_cast<double>(samples);
  SolveReport local;
  local.used_dual = true;
  const Vector dual = solve_spd(system, targets, &local.used_fallback);
  Vector xi(total_rows(designs));
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < designs.size(); ++k) {
    xi.segment(offset, designs[k].rows()) = (designs[k] * dual) / lambdas[k];
    offset += designs[k].rows();
  }
  finish_report(designs, lambdas, targets, samples, xi, local);
  if (report) *report = local;
  return xi;
}

double ridge_objective(std::span<const Matrix> designs, std::span<const double> lambdas, const Vector& targets,
                       std::size_t samples, const Vector& coefficients) {
  check_ridge_inputs(designs, lambdas, targets, samples);
  require_dim(static_cast<std::size_t>(total_rows(designs)), static_cast<std::size_t>(coefficients.size()),
              "ridge coefficients");
  double value = (fitted_values(designs, coefficients) - targets).squaredNorm() / static_cast<double>(samples);
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < designs.size(); ++k) {
    value += lambdas[k] * coefficients.segment(offset, designs[k].rows()).squaredNorm();
    offset += designs[k].rows();
  }
  return value;
}

Matrix assemble_design(const Dataset& dataset, const FeatureBasis& curl_free, const FeatureBasis& symplectic) {
  dataset.validate();
  if (curl_free.kind() != FeatureKind::OddCurlFree || symplectic.kind() != FeatureKind::OddSymplectic) {
    throw InvalidArgument("assemble_design needs an odd-curl-free and an odd-symplectic basis");
  }
  require_dim(curl_free.dim(), dataset.dim(), "assemble_design curl-free basis");
  require_dim(symplectic.dim(), dataset.dim(), "assemble_design symplectic basis");
  const Matrix c = curl_free.design(dataset.states);
  const Matrix s = symplectic.design(dataset.states);
  Matrix phi(c.rows() + s.rows(), c.cols());
  phi << c, s;
  return phi;
}

// HelmholtzModel

HelmholtzModel::HelmholtzModel(FeatureBasis curl_free, FeatureBasis symplectic, Vector alpha, Vector beta,
                               Hyperparameters hyper)
    : curl_free_(std::move(curl_free)),
      symplectic_(std::move(symplectic)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      hyper_(hyper) {
  if (curl_free_.kind() != FeatureKind::OddCurlFree || symplectic_.kind() != FeatureKind::OddSymplectic) {
    throw InvalidArgument("Helmholtz model needs an odd-curl-free and an odd-symplectic basis");
  }
  require_dim(curl_free_.size(), static_cast<std::size_t>(alpha_.size()), "alpha length");
  require_dim(symplectic_.size(), static_cast<std::size_t>(beta_.size()), "beta length");
  require_dim(curl_free_.dim(), symplectic_.dim(), "basis state dimension");
  if (!(curl_free_.width() == symplectic_.width())) {
    throw InvalidArgument("Helmholtz bases must share the kernel width");
  }
}

Decomposition HelmholtzModel::decompose(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "Helmholtz model input");
  return {symplectic_.features(x).transpose() * beta_, curl_free_.features(x).transpose() * alpha_};
}

Vector HelmholtzModel::predict(const Vector& x) const {
  const auto parts = decompose(x);
  return parts.dissipative + parts.symplectic;
}

namespace {

double cosine_potential(const FeatureBasis& basis, const Vector& coeffs, const Vector& x) {
  const Vector proj = basis.weights() * x;
  return -proj.array().cos().matrix().dot(coeffs) / std::sqrt(static_cast<double>(basis.size()));
}

Vector cosine_potential_gradient(const FeatureBasis& basis, const Vector& coeffs, const Vector& x) {
  const Vector proj = basis.weights() * x;
  const Vector scaled = (proj.array().sin() * coeffs.array()).matrix();
  return basis.weights().transpose() * scaled / std::sqrt(static_cast<double>(basis.size()));
}

}  // namespace

double HelmholtzModel::hamiltonian(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "Hamiltonian input");
  return cosine_potential(symplectic_, beta_, x);
}

Vector HelmholtzModel::hamiltonian_gradient(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "Hamiltonian input");
  return cosine_potential_gradient(symplectic_, beta_, x);
}

double HelmholtzModel::dissipation_potential(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "dissipation potential input");
  return cosine_potential(curl_free_, alpha_, x);
}

Vector HelmholtzModel::dissipation_gradient(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "dissipation potential input");
  return cosine_potential_gradient(curl_free_, alpha_, x);
}

VectorField HelmholtzModel::field() const {
  return [model = *this](const Vector& x) { return model.predict(x); };
}

HelmholtzModel HelmholtzModel::negated() const {
  return HelmholtzModel(curl_free_, symplectic_, -alpha_, -beta_, hyper_);
}

// BaselineModel

BaselineModel::BaselineModel(FeatureBasis basis, Vector alpha, Hyperparameters hyper)
    : basis_(std::move(basis)), alpha_(std::move(alpha)), hyper_(hyper) {
  if (basis_.kind() != FeatureKind::GaussianSeparable) {
    throw InvalidArgument("baseline model needs a gaussian-separable basis");
  }
  require_dim(basis_.size(), static_cast<std::size_t>(alpha_.size()), "baseline coefficient length");
}

Vector BaselineModel::predict(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "baseline model input");
  return basis_.features(x).transpose() * alpha_;
}

VectorField BaselineModel::field() const {
  return [model = *this](const Vector& x) { return model.predict(x); };
}

// Fitting

HelmholtzModel fit_helmholtz(const Dataset& dataset, const Hyperparameters& hyper, const FeatureBasis& curl_free,
                             const FeatureBasis& symplectic, SolveReport* report) {
  hyper.validate();
  dataset.validate();
  const Matrix designs[] = {curl_free.design(dataset.states), symplectic.design(dataset.states)};
  const double lambdas[] = {hyper.lambda1, hyper.lambda2};
  const Vector xi = solve_ridge(designs, lambdas, dataset.stacked_targets(), dataset.size(), report);
  const auto d = static_cast<Eigen::Index>(curl_free.size());
  return HelmholtzModel(curl_free, symplectic, xi.head(d), xi.tail(xi.size() - d), hyper);
}

HelmholtzModel fit_helmholtz(const Dataset& dataset, const Hyperparameters& hyper, std::uint64_t seed,
                             SolveReport* report) {
  hyper.validate();
  dataset.validate();
  const auto seeds = SeedSet::from_master(seed);
  auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, hyper.features, dataset.dim(), hyper.sigma,
                                seeds.basis_curl_free);
  auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, hyper.features, dataset.dim(), hyper.sigma,
                                seeds.basis_symplectic);
  return fit_helmholtz(dataset, hyper, c, s, report);
}

BaselineModel fit_baseline(const Dataset& dataset, const Hyperparameters& hyper, const FeatureBasis& basis,
                           SolveReport* report) {
  hyper.validate();
  dataset.validate();
  const Matrix designs[] = {basis.design(dataset.states)};
  const double lambdas[] = {hyper.lambda1};
  Vector alpha = solve_ridge(designs, lambdas, dataset.stacked_targets(), dataset.size(), report);
  return BaselineModel(basis, std::move(alpha), hyper);
}

BaselineModel fit_baseline(const Dataset& dataset, const Hyperparameters& hyper, std::uint64_t seed,
                           SolveReport* report) {
  hyper.validate();
  dataset.validate();
  auto basis = FeatureBasis::sample(FeatureKind::GaussianSeparable, hyper.features, dataset.dim(), hyper.sigma,
                                    SeedSet::from_master(seed).basis_baseline);
  return fit_baseline(dataset, hyper, basis, report);
}

// ExactKernelModel

ExactKernelModel::ExactKernelModel(std::vector<KernelTerm> terms, KernelWidth width, Matrix anchors,
                                   Matrix coefficients)
    : terms_(std::move(terms)), width_(width), anchors_(std::move(anchors)), coefficients_(std::move(coefficients)) {
  if (terms_.empty()) throw InvalidArgument("exact kernel model needs at least one kernel term");
  if (anchors_.rows() != coefficients_.rows() || anchors_.cols() != coefficients_.cols()) {
    throw DimensionMismatch("exact kernel model needs one coefficient vector per anchor");
  }
}

Matrix ExactKernelModel::kernel(const Vector& x, const Vector& z) const {
  Matrix k = Matrix::Zero(x.size(), x.size());
  for (const auto& term : terms_) k += term.weight * evaluate_kernel(term.kind, x, z, width_);
  return k;
}

Vector ExactKernelModel::predict(const Vector& x) const {
  require_dim(static_cast<std::size_t>(anchors_.cols()), static_cast<std::size_t>(x.size()),
              "exact kernel model input");
  Vector out = Vector::Zero(x.size());
  for (Eigen::Index i = 0; i < anchors_.rows(); ++i) {
    out += kernel(x, anchors_.row(i).transpose()) * coefficients_.row(i).transpose();
  }
  return out;
}

VectorField ExactKernelModel::field() const {
  return [model = *this](const Vector& x) { return model.predict(x); };
}

namespace {

ExactKernelModel fit_kernel_sum(const Dataset& dataset, std::vector<KernelTerm> terms, KernelWidth width,
                                double lambda) {
  dataset.validate();
  if (dataset.size() > ExactKernelModel::kMaxSamples) {
    throw InvalidArgument("exact kernel fit is limited to " + std::to_string(ExactKernelModel::kMaxSamples) +
                          " samples, got " + std::to_string(dataset.size()));
  }
  if (!(lambda > 0.0)) throw InvalidArgument("exact kernel fit needs lambda > 0");
  const auto n = static_cast<Eigen::Index>(dataset.dim());
  const auto count = static_cast<Eigen::Index>(dataset.size());
  Matrix system = Matrix::Zero(n * count, n * count);
  for (const auto& term : terms) system += term.weight * gram_matrix(term.kind, dataset.states, width);
  system.diagonal().array() += static_cast<double>(count) * lambda;
  const Vector a = solve_spd(system, dataset.stacked_targets());
  if (!a.allFinite()) throw NumericalError("exact kernel solve produced non-finite coefficients");
  Matrix coefficients = Eigen::Map<const Matrix>(a.data(), n, count).transpose();
  return ExactKernelModel(std::move(terms), width, dataset.states, std::move(coefficients));
}

}  // namespace

ExactKernelModel fit_exact_kernel(const Dataset& dataset, MatrixKernel kind, KernelWidth width, double lambda) {
  return fit_kernel_sum(dataset, {{kind, 1.0}}, width, lambda);
}

ExactKernelModel fit_exact_helmholtz(const Dataset& dataset, KernelWidth width, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("exact Helmholtz fit needs lambdas > 0");
  return fit_kernel_sum(
      dataset, {{MatrixKernel::OddCurlFree, 1.0 / lambda1}, {MatrixKernel::OddSymplectic, 1.0 / lambda2}}, width,
      1.0);
}

}  // namespace helmrff
