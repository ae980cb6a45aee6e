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

#include <doctest.h>

#include <cmath>

#include "helmrff/error.hpp"
#include "helmrff/kernels.hpp"
#include "support.hpp"

using namespace helmrff;
using namespace helmrff::test;

namespace {

const KernelWidth kUnit{1.0};

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// Independent scalar Gaussian used as the oracle for the matrix kernels.
double gauss(const Vec& u, double s) { return std::exp(-u.squaredNorm() / (2 * s * s)); }

double min_eig_ratio(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  return es.eigenvalues().minCoeff() / std::max(1e-300, es.eigenvalues().maxCoeff());
}

}  // namespace

TEST_CASE("kernel width rejects degenerate values") {
  CHECK_THROWS_AS(KernelWidth{0.0}, InvalidArgument);
  CHECK_THROWS_AS(KernelWidth{-1.0}, InvalidArgument);
  CHECK_THROWS_AS(KernelWidth{std::nan("")}, InvalidArgument);
  CHECK_THROWS_AS(KernelWidth{INFINITY}, InvalidArgument);
  CHECK_THROWS_AS(KernelWidth::from_config(1e-7), InvalidArgument);
  CHECK_THROWS_AS(KernelWidth::from_config(1e7), InvalidArgument);
  CHECK(KernelWidth::from_config(1e-6).value() == 1e-6);
  CHECK(KernelWidth::from_config(1e6).value() == 1e6);
}

TEST_CASE("symplectic matrix structure") {
  for (std::size_t m : {1u, 2u, 3u}) {
    const Mat j = symplectic_matrix(m);
    CHECK(j.isApprox(canonical_j(static_cast<Eigen::Index>(m))));
    CHECK((j.transpose() + j).norm() == 0.0);
    CHECK((j * j.transpose() - Mat::Identity(2 * m, 2 * m)).norm() == 0.0);
  }
  std::mt19937_64 rng(3);
  const Vec v = uniform_vector(rng, 4);
  CHECK((apply_symplectic(v) - canonical_j(2) * v).norm() == 0.0);
  CHECK_THROWS_AS(apply_symplectic(Vec::Ones(3)), DimensionMismatch);
}

TEST_CASE("gaussian kernel values") {
  std::mt19937_64 rng(1);
  const Vec x = uniform_vector(rng, 2);
  CHECK(gaussian_kernel(x, x, kUnit) == 1.0);
  CHECK(gaussian_kernel(v2(1, 0), v2(0, 0), kUnit) == doctest::Approx(0.60653065971).epsilon(1e-10));
  // |x - z|^2 = 2 sigma^2
  const KernelWidth s{0.7};
  CHECK(gaussian_kernel(v2(0.7, 0.7), v2(0, 0), s) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  const Vec z = uniform_vector(rng, 2);
  CHECK(gaussian_kernel(x, z, s) == gaussian_kernel(z, x, s));
  CHECK_THROWS_AS(gaussian_kernel(Vec::Zero(2), Vec::Zero(3), kUnit), DimensionMismatch);
}

TEST_CASE("curl-free kernel values") {
  CHECK(curl_free_kernel(v2(0.3, -0.2), v2(0.3, -0.2), kUnit).isApprox(Mat::Identity(2, 2)));
  CHECK(curl_free_kernel(v2(0, 0), v2(0, 0), KernelWidth(2.0)).isApprox(0.25 * Mat::Identity(2, 2)));
  Mat expected = Mat::Zero(2, 2);
  expected(1, 1) = std::exp(-0.5);
  CHECK((curl_free_kernel(v2(1, 0), v2(0, 0), kUnit) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(curl_free_kernel(Vec::Zero(2), Vec::Zero(3), kUnit), DimensionMismatch);
}

TEST_CASE("curl-free kernel equals minus the Hessian of the scalar Gaussian") {
  std::mt19937_64 rng(2);
  for (double s : {0.5, 1.0, 2.0}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vec x = uniform_vector(rng, 2, -2, 2);
      const Vec z = uniform_vector(rng, 2, -2, 2);
      const Mat oracle = -fd_hessian([&](const Vec& y) { return gauss(y - z, s); }, x);
      CHECK((curl_free_kernel(x, z, KernelWidth(s)) - oracle).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }
}

TEST_CASE("symplectic kernel values") {
  CHECK(symplectic_kernel(v2(1, 2), v2(1, 2), kUnit).isApprox(Mat::Identity(2, 2)));
  Mat expected = Mat::Zero(2, 2);
  expected(0, 0) = std::exp(-0.5);
  CHECK((symplectic_kernel(v2(1, 0), v2(0, 0), kUnit) - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(symplectic_kernel(Vec::Zero(3), Vec::Zero(3), kUnit), DimensionMismatch);

  std::mt19937_64 rng(4);
  const Mat j = canonical_j(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = uniform_vector(rng, 4);
    const Vec z = uniform_vector(rng, 4);
    const Mat oracle = j * curl_free_kernel(x, z, kUnit) * j.transpose();
    CHECK((symplectic_kernel(x, z, kUnit) - oracle).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("symplectic kernel columns are divergence free") {
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {2, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = uniform_vector(rng, n, -2, 2);
      const Vec z = uniform_vector(rng, n, -2, 2);
      for (Eigen::Index c = 0; c < n; ++c) {
        auto column = [&](const Vec& y) -> Vec { return symplectic_kernel(y, z, kUnit).col(c); };
        CHECK(std::abs(fd_divergence(column, x)) <= 1e-5);
      }
    }
  }
}

TEST_CASE("curl-free kernel columns are gradients") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = uniform_vector(rng, 2, -2, 2);
    const Vec z = uniform_vector(rng, 2, -2, 2);
    for (Eigen::Index c = 0; c < 2; ++c) {
      auto column = [&](const Vec& y) -> Vec { return curl_free_kernel(y, z, kUnit).col(c); };
      const Mat jac = fd_jacobian(column, x);
      CHECK((jac - jac.transpose()).norm() <= 1e-5 * std::max(1.0, jac.norm()));
    }
  }
}

TEST_CASE("odd kernels vanish at the origin") {
  std::mt19937_64 rng(7);
  const Vec z = uniform_vector(rng, 2);
  const Vec zero = Vec::Zero(2);
  CHECK(odd_curl_free_kernel(zero, z, kUnit).norm() == 0.0);
  CHECK(odd_curl_free_kernel(z, zero, kUnit).norm() == 0.0);
  CHECK(odd_symplectic_kernel(zero, z, kUnit).norm() == 0.0);
  CHECK(odd_symplectic_kernel(z, zero, kUnit).norm() == 0.0);
}

TEST_CASE("odd curl-free kernel composes two curl-free evaluations") {
  const Mat expected =
      0.5 * (curl_free_kernel(v2(0.5, 0), v2(0, 0), kUnit) - curl_free_kernel(v2(1.5, 0), v2(0, 0), kUnit));
  CHECK((odd_curl_free_kernel(v2(1, 0), v2(0.5, 0), kUnit) - expected).cwiseAbs().maxCoeff() < 1e-15);
  // Hand value: diag entries 0.5 (e^{-1/8}(1 - 0.25) - e^{-9/8}(1 - 2.25)) and 0.5 (e^{-1/8} - e^{-9/8}).
  const Mat k = odd_curl_free_kernel(v2(1, 0), v2(0.5, 0), kUnit);
  CHECK(k(0, 0) == doctest::Approx(0.5 * (0.75 * std::exp(-0.125) + 1.25 * std::exp(-1.125))).epsilon(1e-12));
  CHECK(k(1, 1) == doctest::Approx(0.5 * (std::exp(-0.125) - std::exp(-1.125))).epsilon(1e-12));
  CHECK(k(0, 1) == 0.0);
}

TEST_CASE("odd symplectic kernel is the conjugated odd curl-free kernel") {
  std::mt19937_64 rng(8);
  const Mat j = canonical_j(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = uniform_vector(rng, 2, -2, 2);
    const Vec z = uniform_vector(rng, 2, -2, 2);
    const KernelWidth s(0.5 + trial * 0.1);
    const Mat oracle = j * odd_curl_free_kernel(x, z, s) * j.transpose();
    CHECK((odd_symplectic_kernel(x, z, s) - oracle).cwiseAbs().maxCoeff() < 1e-14);
  }
  CHECK_THROWS_AS(odd_symplectic_kernel(Vec::Zero(3), Vec::Zero(3), kUnit), DimensionMismatch);
}

TEST_CASE("odd kernels are odd in each argument") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = uniform_vector(rng, 2, -2, 2);
    const Vec z = uniform_vector(rng, 2, -2, 2);
    for (auto kind : {MatrixKernel::OddCurlFree, MatrixKernel::OddSymplectic}) {
      const Mat k = evaluate_kernel(kind, x, z, kUnit);
      CHECK((evaluate_kernel(kind, -x, z, kUnit) + k).cwiseAbs().maxCoeff() <= 1e-15);
      CHECK((evaluate_kernel(kind, x, -z, kUnit) + k).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
}

TEST_CASE("matrix kernels are symmetric: K(x, z) = K(z, x)^T") {
  std::mt19937_64 rng(10);
  for (auto kind : {MatrixKernel::CurlFree, MatrixKernel::Symplectic, MatrixKernel::OddCurlFree,
                    MatrixKernel::OddSymplectic, MatrixKernel::GaussianSeparable}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = uniform_vector(rng, 2, -2, 2);
      const Vec z = uniform_vector(rng, 2, -2, 2);
      const Mat a = evaluate_kernel(kind, x, z, kUnit);
      const Mat b = evaluate_kernel(kind, z, x, kUnit);
      CHECK((a - b.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }
}

TEST_CASE("Gram matrices are positive semidefinite") {
  std::mt19937_64 rng(11);
  for (auto kind : {MatrixKernel::CurlFree, MatrixKernel::Symplectic, MatrixKernel::OddCurlFree,
                    MatrixKernel::OddSymplectic, MatrixKernel::GaussianSeparable}) {
    for (std::size_t count : {10u, 20u}) {
      for (double s : {0.3, 1.0, 3.0}) {
        const Mat points = uniform_matrix(rng, static_cast<Eigen::Index>(count), 2, -2, 2);
        const Mat g = gram_matrix(kind, points, KernelWidth(s));
        REQUIRE(g.rows() == static_cast<Eigen::Index>(2 * count));
        CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(min_eig_ratio(g) >= -1e-10);
      }
    }
  }
}

TEST_CASE("Gram matrix blocks equal pointwise kernel evaluations") {
  std::mt19937_64 rng(12);
  const Mat points = uniform_matrix(rng, 5, 2);
  for (auto kind : {MatrixKernel::CurlFree, MatrixKernel::Symplectic, MatrixKernel::OddCurlFree,
                    MatrixKernel::OddSymplectic, MatrixKernel::GaussianSeparable}) {
    const Mat g = gram_matrix(kind, points, kUnit);
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        const Mat block = evaluate_kernel(kind, points.row(i).transpose(), points.row(j).transpose(), kUnit);
        CHECK((g.block(2 * i, 2 * j, 2, 2) - block).cwiseAbs().maxCoeff() <= 1e-15);
      }
    }
  }
}

TEST_CASE("kernel names round-trip") {
  for (auto kind : {MatrixKernel::CurlFree, MatrixKernel::Symplectic, MatrixKernel::OddCurlFree,
                    MatrixKernel::OddSymplectic, MatrixKernel::GaussianSeparable}) {
    CHECK(matrix_kernel_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(matrix_kernel_from_string("laplace"), InvalidArgument);
}
