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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace helmrff::test {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Mat uniform_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double lo = -1.0,
                          double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline double fd_step(const Vec& x) { return 1e-4 * std::max(1.0, x.norm()); }

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  const double h = fd_step(x);
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

/// J(i, j) = d f_i / d x_j.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  const double h = fd_step(x);
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Vec a = x, b = x;
    a(j) += h;
    b(j) -= h;
    jac.col(j) = (f(a) - f(b)) / (2.0 * h);
  }
  return jac;
}

inline double fd_divergence(const std::function<Vec(const Vec&)>& f, const Vec& x) {
  return fd_jacobian(f, x).trace();
}

inline Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x) {
  const double h = fd_step(x);
  const Eigen::Index n = x.size();
  Mat hess(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      auto at = [&](double si, double sj) {
        Vec y = x;
        y(i) += si * h;
        y(j) += sj * h;
        return f(y);
      };
      hess(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
    }
  }
  return hess;
}

inline Mat canonical_j(Eigen::Index m) {
  Mat j = Mat::Zero(2 * m, 2 * m);
  j.topRightCorner(m, m) = Mat::Identity(m, m);
  j.bottomLeftCorner(m, m) = -Mat::Identity(m, m);
  return j;
}

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace helmrff::test
