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
#include <string_view>

#include "helmrff/kernels.hpp"

namespace helmrff {

enum class FeatureKind { OddCurlFree, OddSymplectic, GaussianSeparable };

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view name);

/// The exact kernel a feature map approximates.
MatrixKernel approximated_kernel(FeatureKind kind);

/// A random Fourier feature basis: d frequency vectors w_i ~ N(0, sigma^-2 I_n),
/// plus uniform phases for the Gaussian-separable map.
///
/// Frequencies are drawn as standard normals divided by sigma, so two bases with
/// the same seed and different widths differ only by a scale factor. Immutable.
class FeatureBasis {
 public:
  static FeatureBasis sample(FeatureKind kind, std::size_t d, std::size_t n, KernelWidth width,
                             std::uint64_t seed);

  /// Rebuilds a basis from stored frequencies (one per row) and phases.
  static FeatureBasis from_parts(FeatureKind kind, KernelWidth width, std::uint64_t seed,
                                 Matrix weights, Vector phases);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(weights_.cols()); }
  KernelWidth width() const noexcept { return width_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& phases() const noexcept { return phases_; }

  /// Psi(x), a d x n matrix.
  Matrix features(const Vector& x) const;

  /// Horizontal stack [Psi(x_1) ... Psi(x_N)] (d x nN) for states given as rows.
  Matrix design(const Matrix& states) const;

 private:
  FeatureBasis(FeatureKind kind, KernelWidth width, std::uint64_t seed, Matrix weights, Vector phases);
  void features_into(const Vector& x, Eigen::Ref<Matrix> out) const;

  FeatureKind kind_;
  KernelWidth width_;
  std::uint64_t seed_;
  Matrix weights_;     // d x n, row i = w_i^T
  Matrix directions_;  // d x n, row i = w_i^T or (J w_i)^T for the odd maps
  Vector phases_;      // d entries, empty for the odd maps
};

Matrix features_odd_curl_free(const Vector& x, const FeatureBasis& basis);
Matrix features_odd_symplectic(const Vector& x, const FeatureBasis& basis);
Matrix features_gaussian_separable(const Vector& x, const FeatureBasis& basis);

}  // namespace helmrff
