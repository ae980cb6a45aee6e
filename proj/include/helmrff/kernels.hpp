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

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>

namespace helmrff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Gaussian length scale. Always positive and finite.
class KernelWidth {
 public:
  static constexpr double kMin = 1e-6;
  static constexpr double kMax = 1e6;

  explicit KernelWidth(double sigma);

  /// Stricter variant used for user-supplied configuration: sigma must lie in [kMin, kMax].
  static KernelWidth from_config(double sigma);

  double value() const noexcept { return sigma_; }
  friend bool operator==(KernelWidth, KernelWidth) = default;

 private:
  double sigma_;
};

/// Canonical 2m x 2m symplectic matrix [[0, I], [-I, 0]].
Matrix symplectic_matrix(std::size_t m);

/// Applies J to v without forming J. v must have even length.
Vector apply_symplectic(const Vector& v);

double gaussian_kernel(const Vector& x, const Vector& z, KernelWidth width);

/// (1/s^2) exp(-|u|^2 / 2s^2) (I - u u^T / s^2), u = x - z.
Matrix curl_free_kernel(const Vector& x, const Vector& z, KernelWidth width);

/// J G_c(x - z) J^T. Requires even dimension.
Matrix symplectic_kernel(const Vector& x, const Vector& z, KernelWidth width);

/// (G_c(x - z) - G_c(x + z)) / 2.
Matrix odd_curl_free_kernel(const Vector& x, const Vector& z, KernelWidth width);

/// (G_s(x - z) - G_s(x + z)) / 2. Requires even dimension.
Matrix odd_symplectic_kernel(const Vector& x, const Vector& z, KernelWidth width);

enum class MatrixKernel {
  CurlFree,
  Symplectic,
  OddCurlFree,
  OddSymplectic,
  GaussianSeparable,  // k_sigma(x, z) I_n
};

std::string_view to_string(MatrixKernel kind);
MatrixKernel matrix_kernel_from_string(std::string_view name);

Matrix evaluate_kernel(MatrixKernel kind, const Vector& x, const Vector& z, KernelWidth width);

/// Block Gram matrix (nN x nN) over the rows of points (N x n); block (i, j) = K(x_i, x_j).
Matrix gram_matrix(MatrixKernel kind, const Matrix& points, KernelWidth width);

}  // namespace helmrff
