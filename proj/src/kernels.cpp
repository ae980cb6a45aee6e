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

#include "helmrff/kernels.hpp"

#include <cmath>
#include <string>

#include "helmrff/error.hpp"

namespace helmrff {

KernelWidth::KernelWidth(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("kernel width must be positive and finite, got " + std::to_string(sigma));
  }
}

KernelWidth KernelWidth::from_config(double sigma) {
  if (!(sigma >= kMin && sigma <= kMax)) {
    throw InvalidArgument("kernel width " + std::to_string(sigma) + " outside [1e-6, 1e6]");
  }
  return KernelWidth(sigma);
}

Matrix symplectic_matrix(std::size_t m) {
  const auto mm = static_cast<Eigen::Index>(m);
  Matrix j = Matrix::Zero(2 * mm, 2 * mm);
  j.topRightCorner(mm, mm).setIdentity();
  j.bottomLeftCorner(mm, mm) = -Matrix::Identity(mm, mm);
  return j;
}

Vector apply_symplectic(const Vector& v) {
  if (v.size() % 2 != 0) {
    throw DimensionMismatch("symplectic structure needs an even dimension, got " +
                            std::to_string(v.size()));
  }
  const Eigen::Index m = v.size() / 2;
  Vector out(v.size());
  out.head(m) = v.tail(m);
  out.tail(m) = -v.head(m);
  return out;
}

namespace {

void require_same(const Vector& x, const Vector& z, const char* context) {
  require_dim(static_cast<std::size_t>(x.size()), static_cast<std::size_t>(z.size()), context);
}

void require_even(Eigen::Index n, const char* context) {
  if (n % 2 != 0) {
    throw DimensionMismatch(std::string(context) + ": symplectic kernels need an even dimension, got " +
                            std::to_string(n));
  }
}

Matrix curl_free_of_offset(const Vector& u, double sigma) {
  const double s2 = sigma * sigma;
  const double scale = std::exp(-u.squaredNorm() / (2.0 * s2)) / s2;
  Matrix g = Matrix::Identity(u.size(), u.size());
  g.noalias() -= (u * u.transpose()) / s2;
  return scale * g;
}

// J A J^T for A square of even size: [[A_pp, -A_pq], [-A_qp, A_qq]].
Matrix conjugate_symplectic(const Matrix& a) {
  const Eigen::Index m = a.rows() / 2;
  Matrix out(a.rows(), a.cols());
  out.topLeftCorner(m, m) = a.bottomRightCorner(m, m);
  out.topRightCorner(m, m) = -a.bottomLeftCorner(m, m);
  out.bottomLeftCorner(m, m) = -a.topRightCorner(m, m);
  out.bottomRightCorner(m, m) = a.topLeftCorner(m, m);
  return out;
}

}  // namespace

double gaussian_kernel(const Vector& x, const Vector& z, KernelWidth width) {
  require_same(x, z, "gaussian_kernel");
  const double s = width.value();
  return std::exp(-(x - z).squaredNorm() / (2.0 * s * s));
}

Matrix curl_free_kernel(const Vector& x, const Vector& z, KernelWidth width) {
  require_same(x, z, "curl_free_kernel");
  return curl_free_of_offset(x - z, width.value());
}

Matrix symplectic_kernel(const Vector& x, const Vector& z, KernelWidth width) {
  require_same(x, z, "symplectic_kernel");
  require_even(x.size(), "symplectic_kernel");
  return conjugate_symplectic(curl_free_of_offset(x - z, width.value()));
}

Matrix odd_curl_free_kernel(const Vector& x, const Vector& z, KernelWidth width) {
  require_same(x, z, "odd_curl_free_kernel");
  const double s = width.value();
  return 0.5 * (curl_free_of_offset(x - z, s) - curl_free_of_offset(x + z, s));
}

Matrix odd_symplectic_kernel(const Vector& x, const Vector& z, KernelWidth width) {
  require_same(x, z, "odd_symplectic_kernel");
  require_even(x.size(), "odd_symplectic_kernel");
  const double s = width.value();
  return 0.5 * (conjugate_symplectic(curl_free_of_offset(x - z, s)) -
                conjugate_symplectic(curl_free_of_offset(x + z, s)));
}

std::string_view to_string(MatrixKernel kind) {
  switch (kind) {
    case MatrixKernel::CurlFree: return "curl-free";
    case MatrixKernel::Symplectic: return "symplectic";
    case MatrixKernel::OddCurlFree: return "odd-curl-free";
    case MatrixKernel::OddSymplectic: return "odd-symplectic";
    case MatrixKernel::GaussianSeparable: return "gaussian-separable";
  }
  return "unknown";
}

MatrixKernel matrix_kernel_from_string(std::string_view name) {
  for (auto k : {MatrixKernel::CurlFree, MatrixKernel::Symplectic, MatrixKernel::OddCurlFree,
                 MatrixKernel::OddSymplectic, MatrixKernel::GaussianSeparable}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown kernel kind '" + std::string(name) + "'");
}

Matrix evaluate_kernel(MatrixKernel kind, const Vector& x, const Vector& z, KernelWidth width) {
  switch (kind) {
    case MatrixKernel::CurlFree: return curl_free_kernel(x, z, width);
    case MatrixKernel::Symplectic: return symplectic_kernel(x, z, width);
    case MatrixKernel::OddCurlFree: return odd_curl_free_kernel(x, z, width);
    case MatrixKernel::OddSymplectic: return odd_symplectic_kernel(x, z, width);
    case MatrixKernel::GaussianSeparable:
      return gaussian_kernel(x, z, width) * Matrix::Identity(x.size(), x.size());
  }
  throw InvalidArgument("unknown kernel kind");
}

Matrix gram_matrix(MatrixKernel kind, const Matrix& points, KernelWidth width) {
  const Eigen::Index count = points.rows();
  const Eigen::Index n = points.cols();
  Matrix gram(n * count, n * count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vector xi = points.row(i).transpose();
    for (Eigen::Index j = 0; j < count; ++j) {
      gram.block(i * n, j * n, n, n) = evaluate_kernel(kind, xi, points.row(j).transpose(), width);
    }
  }
  return gram;
}

}  // namespace helmrff
