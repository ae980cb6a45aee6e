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

#include "helmrff/features.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "helmrff/error.hpp"
#include "helmrff/rng.hpp"

namespace helmrff {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::OddCurlFree: return "odd-curl-free";
    case FeatureKind::OddSymplectic: return "odd-symplectic";
    case FeatureKind::GaussianSeparable: return "gaussian-separable";
  }
  return "unknown";
}

FeatureKind feature_kind_from_string(std::string_view name) {
  for (auto k : {FeatureKind::OddCurlFree, FeatureKind::OddSymplectic, FeatureKind::GaussianSeparable}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown feature kind '" + std::string(name) + "'");
}

MatrixKernel approximated_kernel(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::OddCurlFree: return MatrixKernel::OddCurlFree;
    case FeatureKind::OddSymplectic: return MatrixKernel::OddSymplectic;
    case FeatureKind::GaussianSeparable: return MatrixKernel::GaussianSeparable;
  }
  throw InvalidArgument("unknown feature kind");
}

FeatureBasis::FeatureBasis(FeatureKind kind, KernelWidth width, std::uint64_t seed, Matrix weights,
                           Vector phases)
    : kind_(kind), width_(width), seed_(seed), weights_(std::move(weights)), phases_(std::move(phases)) {
  const auto d = weights_.rows();
  const auto n = weights_.cols();
  if (d < 1) throw InvalidArgument("feature basis needs d >= 1");
  if (n < 1) throw InvalidArgument("feature basis needs n >= 1");
  switch (kind_) {
    case FeatureKind::OddCurlFree:
      directions_ = weights_;
      break;
    case FeatureKind::OddSymplectic:
      if (n % 2 != 0) {
        throw DimensionMismatch("odd-symplectic features need an even state dimension, got " +
                                std::to_string(n));
      }
      directions_.resize(d, n);
      for (Eigen::Index i = 0; i < d; ++i) {
        directions_.row(i) = apply_symplectic(weights_.row(i).transpose()).transpose();
      }
      break;
    case FeatureKind::GaussianSeparable:
      if (d % n != 0) {
        throw InvalidArgument("gaussian-separable features need d divisible by n (d = " +
                              std::to_string(d) + ", n = " + std::to_string(n) + ")");
      }
      if (phases_.size() != d) {
        throw DimensionMismatch("gaussian-separable basis needs one phase per frequency");
      }
      break;
  }
}

FeatureBasis FeatureBasis::sample(FeatureKind kind, std::size_t d, std::size_t n, KernelWidth width,
                                  std::uint64_t seed) {
  if (d < 1) throw InvalidArgument("feature basis needs d >= 1");
  if (n < 1) throw InvalidArgument("feature basis needs n >= 1");
  Engine engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(d);
  const auto cols = static_cast<Eigen::Index>(n);
  Matrix weights(rows, cols);
  const double inv_sigma = 1.0 / width.value();
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) weights(i, j) = normal(engine) * inv_sigma;
  }
  Vector phases;
  if (kind == FeatureKind::GaussianSeparable) {
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    phases.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) phases(i) = uniform(engine);
  }
  return FeatureBasis(kind, width, seed, std::move(weights), std::move(phases));
}

FeatureBasis FeatureBasis::from_parts(FeatureKind kind, KernelWidth width, std::uint64_t seed,
                                      Matrix weights, Vector phases) {
  return FeatureBasis(kind, width, seed, std::move(weights), std::move(phases));
}

void FeatureBasis::features_into(const Vector& x, Eigen::Ref<Matrix> out) const {
  const Eigen::Index d = weights_.rows();
  const Eigen::Index n = weights_.cols();
  const Vector proj = weights_ * x;
  if (kind_ == FeatureKind::GaussianSeparable) {
    const Eigen::Index block = d / n;
    const double scale = std::sqrt(2.0 / static_cast<double>(block));
    out.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = j * block; i < (j + 1) * block; ++i) {
        out(i, j) = scale * std::cos(proj(i) + phases_(i));
      }
    }
    return;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) {
    out.row(i) = (scale * std::sin(proj(i))) * directions_.row(i);
  }
}

Matrix FeatureBasis::features(const Vector& x) const {
  require_dim(dim(), static_cast<std::size_t>(x.size()), "feature map");
  Matrix out(weights_.rows(), weights_.cols());
  features_into(x, out);
  return out;
}

Matrix FeatureBasis::design(const Matrix& states) const {
  require_dim(dim(), static_cast<std::size_t>(states.cols()), "feature design");
  const Eigen::Index n = weights_.cols();
  Matrix out(weights_.rows(), n * states.rows());
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    features_into(states.row(i).transpose(), out.middleCols(i * n, n));
  }
  return out;
}

namespace {

Matrix features_of_kind(FeatureKind expected, const Vector& x, const FeatureBasis& basis) {
  if (basis.kind() != expected) {
    throw InvalidArgument("expected a " + std::string(to_string(expected)) + " basis, got " +
                          std::string(to_string(basis.kind())));
  }
  return basis.features(x);
}

}  // namespace

Matrix features_odd_curl_free(const Vector& x, const FeatureBasis& basis) {
  return features_of_kind(FeatureKind::OddCurlFree, x, basis);
}

Matrix features_odd_symplectic(const Vector& x, const FeatureBasis& basis) {
  return features_of_kind(FeatureKind::OddSymplectic, x, basis);
}

Matrix features_gaussian_separable(const Vector& x, const FeatureBasis& basis) {
  return features_of_kind(FeatureKind::GaussianSeparable, x, basis);
}

}  // namespace helmrff
