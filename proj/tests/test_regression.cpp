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

#include <array>
#include <cmath>

#include "helmrff/error.hpp"
#include "helmrff/evaluation.hpp"
#include "helmrff/regression.hpp"
#include "helmrff/rng.hpp"
#include "helmrff/systems.hpp"
#include "support.hpp"

using namespace helmrff;
using namespace helmrff::test;

namespace {

Dataset random_dataset(std::mt19937_64& rng, Eigen::Index count, Eigen::Index n = 2) {
  Dataset d;
  d.states = uniform_matrix(rng, count, n, -2, 2);
  d.derivatives = uniform_matrix(rng, count, n, -1, 1);
  return d;
}

Hyperparameters hyper(double sigma, double l1, double l2, std::size_t d) {
  Hyperparameters h;
  h.sigma = KernelWidth(sigma);
  h.lambda1 = l1;
  h.lambda2 = l2;
  h.features = d;
  return h;
}

// A Helmholtz model with random coefficients, for structural checks independent of fitting.
HelmholtzModel random_model(std::uint64_t seed, std::size_t d = 60, double sigma = 0.8) {
  std::mt19937_64 rng(seed);
  auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, d, 2, KernelWidth(sigma), seed + 1);
  auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, d, 2, KernelWidth(sigma), seed + 2);
  return HelmholtzModel(std::move(c), std::move(s), uniform_vector(rng, static_cast<Eigen::Index>(d)),
                        uniform_vector(rng, static_cast<Eigen::Index>(d)), hyper(sigma, 1e-3, 1e-3, d));
}

// Plain gradient descent on (1/N)|Phi^T xi - X|^2 + xi^T Lambda xi, step 1/L.
Vec gradient_descent(const Mat& phi, const Vec& lambda_diag, const Vec& targets, double samples, int steps) {
  const Mat h = 2.0 * (phi * phi.transpose() / samples) + 2.0 * Mat(lambda_diag.asDiagonal());
  const double lipschitz = Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues().maxCoeff();
  Vec xi = Vec::Zero(phi.rows());
  for (int k = 0; k < steps; ++k) {
    const Vec grad = 2.0 * phi * (phi.transpose() * xi - targets) / samples + 2.0 * lambda_diag.cwiseProduct(xi);
    xi -= grad / lipschitz;
  }
  return xi;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  CHECK_NOTHROW(hyper(1, 1e-3, 1e-3, 10).validate());
  CHECK_THROWS_AS(hyper(1, 0.0, 1e-3, 10).validate(), InvalidArgument);
  CHECK_THROWS_AS(hyper(1, 1e-3, -1.0, 10).validate(), InvalidArgument);
  CHECK_THROWS_AS(hyper(1, 1e-3, 1e-3, 0).validate(), InvalidArgument);
}

TEST_CASE("assemble_design shape and blocks") {
  std::mt19937_64 rng(1);
  const auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, 3, 2, KernelWidth(1.0), 1);
  const auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, 3, 2, KernelWidth(1.0), 2);
  const Dataset one = random_dataset(rng, 1);
  const Mat phi1 = assemble_design(one, c, s);
  CHECK(phi1.rows() == 6);
  CHECK(phi1.cols() == 2);

  Dataset zeros = random_dataset(rng, 4);
  zeros.states.setZero();
  CHECK(assemble_design(zeros, c, s).norm() == 0.0);

  const Dataset data = random_dataset(rng, 6);
  const Mat phi = assemble_design(data, c, s);
  const Mat gram = phi.transpose() * phi;
  for (Eigen::Index i = 0; i < 6; ++i) {
    const Vec x = data.states.row(i).transpose();
    const Mat pc = c.features(x);
    const Mat ps = s.features(x);
    CHECK((phi.block(0, 2 * i, 3, 2) - pc).norm() == 0.0);
    CHECK((phi.block(3, 2 * i, 3, 2) - ps).norm() == 0.0);
    const Mat block = pc.transpose() * pc + ps.transpose() * ps;
    CHECK((gram.block(2 * i, 2 * i, 2, 2) - block).cwiseAbs().maxCoeff() <= 1e-14);
  }
  const auto c3 = FeatureBasis::sample(FeatureKind::OddCurlFree, 3, 4, KernelWidth(1.0), 1);
  CHECK_THROWS_AS(assemble_design(data, c3, s), DimensionMismatch);
}

TEST_CASE("primal and dual ridge solves agree") {
  std::mt19937_64 rng(2);
  for (std::size_t d : {4u, 40u}) {
    const Dataset data = random_dataset(rng, 8);
    const auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, d, 2, KernelWidth(1.0), 3);
    const auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, d, 2, KernelWidth(1.0), 4);
    const std::array<Matrix, 2> designs{c.design(data.states), s.design(data.states)};
    const std::array<double, 2> lambdas{1e-2, 3e-3};
    SolveReport rep_auto, rep_primal;
    const Vec a = solve_ridge(designs, lambdas, data.stacked_targets(), 8, &rep_auto);
    const Vec b = solve_ridge_primal(designs, lambdas, data.stacked_targets(), 8, &rep_primal);
    CHECK(rep_auto.used_dual == (2 * d > 16));
    CHECK_FALSE(rep_primal.used_dual);
    CHECK((a - b).norm() <= 1e-8 * b.norm());
    CHECK(rep_auto.relative_residual <= 1e-8);
    CHECK(rep_primal.relative_residual <= 1e-8);
  }
}

TEST_CASE("closed-form Helmholtz fit matches gradient descent") {
  std::mt19937_64 rng(3);
  const Dataset data = random_dataset(rng, 10);
  const auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, 20, 2, KernelWidth(1.0), 5);
  const auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, 20, 2, KernelWidth(1.0), 6);
  const auto model = fit_helmholtz(data, hyper(1.0, 0.05, 0.02, 20), c, s);
  Vec lambda_diag(40);
  lambda_diag << Vec::Constant(20, 0.05), Vec::Constant(20, 0.02);
  const Vec xi = gradient_descent(assemble_design(data, c, s), lambda_diag, data.stacked_targets(), 10.0, 5000);
  Vec closed(40);
  closed << model.alpha(), model.beta();
  CHECK((closed - xi).norm() <= 1e-4 * xi.norm());
}

TEST_CASE("closed-form baseline fit matches gradient descent") {
  std::mt19937_64 rng(4);
  const Dataset data = random_dataset(rng, 10);
  const auto basis = FeatureBasis::sample(FeatureKind::GaussianSeparable, 20, 2, KernelWidth(1.0), 7);
  const auto model = fit_baseline(data, hyper(1.0, 0.05, 0.05, 20), basis);
  const Vec xi =
      gradient_descent(basis.design(data.states), Vec::Constant(20, 0.05), data.stacked_targets(), 10.0, 5000);
  CHECK((model.alpha() - xi).norm() <= 1e-4 * xi.norm());
}

TEST_CASE("the fitted coefficients minimize the ridge objective") {
  std::mt19937_64 rng(5);
  const Dataset data = random_dataset(rng, 12);
  const auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, 200, 2, KernelWidth(1.5), 8);
  const auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, 200, 2, KernelWidth(1.5), 9);
  SolveReport report;
  const auto model = fit_helmholtz(data, hyper(1.5, 1e-3, 1e-4, 200), c, s, &report);
  CHECK(report.used_dual);
  CHECK(report.relative_residual <= 1e-8);
  const std::array<Matrix, 2> designs{c.design(data.states), s.design(data.states)};
  const std::array<double, 2> lambdas{1e-3, 1e-4};
  Vec xi(400);
  xi << model.alpha(), model.beta();
  const double best = ridge_objective(designs, lambdas, data.stacked_targets(), 12, xi);
  for (int k = 0; k < 100; ++k) {
    Vec dir = uniform_vector(rng, 400);
    dir *= 1e-3 / dir.norm();
    CHECK(ridge_objective(designs, lambdas, data.stacked_targets(), 12, xi + dir) >= best);
  }
}

TEST_CASE("ridge limits") {
  std::mt19937_64 rng(6);
  const Dataset data = random_dataset(rng, 10);
  const double target_norm = data.stacked_targets().norm();
  const auto strong = fit_helmholtz(data, hyper(1.0, 1e6, 1e6, 50), 11);
  CHECK(strong.alpha().norm() <= 1e-3 * target_norm);
  CHECK(strong.beta().norm() <= 1e-3 * target_norm);
  const auto strong_base = fit_baseline(data, hyper(1.0, 1e6, 1e6, 50), 11);
  CHECK(strong_base.alpha().norm() <= 1e-3 * target_norm);

  Dataset still = data;
  still.derivatives.setZero();
  const auto zero = fit_helmholtz(still, hyper(1.0, 1e-3, 1e-3, 50), 11);
  CHECK(zero.alpha().norm() == 0.0);
  CHECK(zero.beta().norm() == 0.0);
}

TEST_CASE("fits are deterministic in the seed and use independent bases") {
  std::mt19937_64 rng(7);
  const Dataset data = random_dataset(rng, 10);
  const auto a = fit_helmholtz(data, hyper(1.0, 1e-3, 1e-3, 40), 3);
  const auto b = fit_helmholtz(data, hyper(1.0, 1e-3, 1e-3, 40), 3);
  CHECK(a.alpha() == b.alpha());
  CHECK(a.beta() == b.beta());
  CHECK(a.curl_free_basis().weights() != a.symplectic_basis().weights());
  const SeedSet seeds = SeedSet::from_master(3);
  CHECK(a.curl_free_basis().seed() == seeds.basis_curl_free);
  CHECK(a.symplectic_basis().seed() == seeds.basis_symplectic);
  CHECK(fit_baseline(data, hyper(1.0, 1e-3, 1e-3, 40), 3).basis().seed() == seeds.basis_baseline);
}

TEST_CASE("prediction basics") {
  auto c = FeatureBasis::sample(FeatureKind::OddCurlFree, 20, 2, KernelWidth(1.0), 1);
  auto s = FeatureBasis::sample(FeatureKind::OddSymplectic, 20, 2, KernelWidth(1.0), 2);
  const HelmholtzModel zero(c, s, Vec::Zero(20), Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20));
  const Vec x = (Vec(2) << 0.4, -1.1).finished();
  CHECK(zero.predict(x).norm() == 0.0);

  const auto model = random_model(3);
  CHECK(model.predict(Vec::Zero(2)).norm() == 0.0);
  const auto parts = model.decompose(x);
  CHECK((model.predict(x) - (parts.symplectic + parts.dissipative)).norm() <= 1e-15);
  CHECK_THROWS_AS(model.predict(Vec::Zero(3)), DimensionMismatch);
  CHECK((model.negated().predict(x) + model.predict(x)).norm() == 0.0);

  CHECK_THROWS_AS(HelmholtzModel(c, s, Vec::Zero(19), Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20)), DimensionMismatch);
  CHECK_THROWS(HelmholtzModel(s, c, Vec::Zero(20), Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20)));
  auto wide = FeatureBasis::sample(FeatureKind::OddSymplectic, 20, 2, KernelWidth(2.0), 2);
  CHECK_THROWS(HelmholtzModel(c, wide, Vec::Zero(20), Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20)));
}

TEST_CASE("decomposition parts and potentials") {
  std::mt19937_64 rng(8);
  const auto model = random_model(9);
  const Mat j = canonical_j(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec x = uniform_vector(rng, 2, -2, 2);
    const auto parts = model.decompose(x);
    const auto neg = model.decompose(-x);
    CHECK((neg.symplectic + parts.symplectic).norm() == 0.0);
    CHECK((neg.dissipative + parts.dissipative).norm() == 0.0);

    const Vec grad_phi = fd_gradient([&](const Vec& y) { return model.dissipation_potential(y); }, x);
    CHECK((grad_phi - parts.dissipative).cwiseAbs().maxCoeff() <= 1e-4);
    CHECK((model.dissipation_gradient(x) - parts.dissipative).cwiseAbs().maxCoeff() <= 1e-14);

    const Vec grad_h = fd_gradient([&](const Vec& y) { return model.hamiltonian(y); }, x);
    CHECK((j * grad_h - parts.symplectic).cwiseAbs().maxCoeff() <= 1e-4);

    CHECK(model.hamiltonian(-x) == doctest::Approx(model.hamiltonian(x)).epsilon(1e-14));
    CHECK(model.dissipation_potential(-x) == doctest::Approx(model.dissipation_potential(x)).epsilon(1e-14));
  }

  auto c = model.curl_free_basis();
  auto s = model.symplectic_basis();
  const HelmholtzModel no_beta(c, s, model.alpha(), Vec::Zero(60), model.hyper());
  const HelmholtzModel no_alpha(c, s, Vec::Zero(60), model.beta(), model.hyper());
  const Vec x = (Vec(2) << 0.3, 0.9).finished();
  CHECK(no_beta.decompose(x).symplectic.norm() == 0.0);
  CHECK(no_beta.hamiltonian(x) == no_beta.hamiltonian(Vec::Zero(2)));
  CHECK(no_alpha.dissipation_potential(x) == no_alpha.dissipation_potential(Vec::Zero(2)));
}

TEST_CASE("learned field structure at 50 probes") {
  std::mt19937_64 rng(10);
  const auto model = random_model(11, 200, 1.0);
  auto sym = [&](const Vec& y) -> Vec { return model.decompose(y).symplectic; };
  auto dis = [&](const Vec& y) -> Vec { return model.decompose(y).dissipative; };
  for (int p = 0; p < 50; ++p) {
    const Vec x = uniform_vector(rng, 2, -3, 3);
    CHECK((model.predict(-x) + model.predict(x)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(fd_divergence(sym, x)) <= 1e-5);
    const Mat jac = fd_jacobian(dis, x);
    CHECK((jac - jac.transpose()).norm() <= 1e-4 * jac.norm());
    const Vec grad_h = model.hamiltonian_gradient(x);
    CHECK(std::abs(grad_h.dot(model.decompose(x).symplectic)) <= 1e-10);
  }
}

TEST_CASE("the learned Hamiltonian is conserved by its own symplectic flow") {
  const auto model = random_model(12, 100, 1.0);
  auto sym = [&](const Vector& y) -> Vector { return model.decompose(y).symplectic; };
  const Vec x0 = (Vec(2) << 0.7, -0.4).finished();
  const auto traj = integrate_rk4(sym, x0, 0.01, 10.0);
  const double h0 = model.hamiltonian(x0);
  double drift = 0.0;
  for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
    drift = std::max(drift, std::abs(model.hamiltonian(traj.states.row(k).transpose()) - h0));
  }
  CHECK(drift <= 1e-3);
}

TEST_CASE("baseline model") {
  const auto basis = FeatureBasis::sample(FeatureKind::GaussianSeparable, 20, 2, KernelWidth(1.0), 1);
  const BaselineModel zero(basis, Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20));
  CHECK(zero.predict(Vec::Ones(2)).norm() == 0.0);
  CHECK_THROWS_AS(BaselineModel(basis, Vec::Zero(3), hyper(1, 1e-3, 1e-3, 20)), DimensionMismatch);
  const auto odd = FeatureBasis::sample(FeatureKind::OddCurlFree, 20, 2, KernelWidth(1.0), 1);
  CHECK_THROWS(BaselineModel(odd, Vec::Zero(20), hyper(1, 1e-3, 1e-3, 20)));
}

TEST_CASE("exact kernel fit: scalar and limit cases") {
  Dataset one;
  one.states = (Mat(1, 2) << 0.3, -0.5).finished();
  one.derivatives = (Mat(1, 2) << 1.0, 2.0).finished();
  // K(x, x) = I / sigma^2 for the curl-free kernel.
  const double sigma = 0.5;
  const double lambda = 0.1;
  const auto m = fit_exact_kernel(one, MatrixKernel::CurlFree, KernelWidth(sigma), lambda);
  const Vec expected = one.derivatives.row(0).transpose() / (1.0 / (sigma * sigma) + lambda);
  CHECK((m.coefficients().row(0).transpose() - expected).norm() <= 1e-14);

  std::mt19937_64 rng(13);
  const Dataset data = random_dataset(rng, 6);
  const double big = 1e8;
  const auto limit = fit_exact_kernel(data, MatrixKernel::OddCurlFree, KernelWidth(1.0), big);
  const Mat asymptote = data.derivatives / (6.0 * big);
  CHECK((limit.coefficients() - asymptote).cwiseAbs().maxCoeff() <= 1e-6 * asymptote.cwiseAbs().maxCoeff());

  Dataset too_many = random_dataset(rng, ExactKernelModel::kMaxSamples + 1);
  CHECK_THROWS_AS(fit_exact_kernel(too_many, MatrixKernel::CurlFree, KernelWidth(1.0), 1.0), InvalidArgument);
}

TEST_CASE("exact kernel fit solves the representer system") {
  std::mt19937_64 rng(14);
  const Dataset data = random_dataset(rng, 7);
  const KernelWidth w(1.2);
  const auto m = fit_exact_helmholtz(data, w, 1e-2, 1e-3);
  const Mat gram = gram_matrix(MatrixKernel::OddCurlFree, data.states, w) / 1e-2 +
                   gram_matrix(MatrixKernel::OddSymplectic, data.states, w) / 1e-3;
  Vec a(14);
  for (Eigen::Index i = 0; i < 7; ++i) a.segment(2 * i, 2) = m.coefficients().row(i).transpose();
  const Vec lhs = gram * a + 7.0 * a;
  CHECK((lhs - data.stacked_targets()).norm() <= 1e-8 * data.stacked_targets().norm());
  const Vec x = data.states.row(2).transpose();
  Vec manual = Vec::Zero(2);
  for (Eigen::Index i = 0; i < 7; ++i) {
    const Vec xi = data.states.row(i).transpose();
    manual += (odd_curl_free_kernel(x, xi, w) / 1e-2 + odd_symplectic_kernel(x, xi, w) / 1e-3) *
              m.coefficients().row(i).transpose();
  }
  CHECK((m.predict(x) - manual).norm() <= 1e-12 * manual.norm());
}

TEST_CASE("RFF Helmholtz fit approaches the exact two-kernel fit") {
  // Moderate d keeps this fast; the d = 2e4 version runs in the acceptance suite.
  std::mt19937_64 rng(15);
  Dataset data = random_dataset(rng, 6);
  const KernelWidth w(2.0);
  const auto exact = fit_exact_helmholtz(data, w, 1e-2, 1e-2);
  auto rel_error = [&](std::size_t d) {
    const auto model = fit_helmholtz(data, hyper(2.0, 1e-2, 1e-2, d), 21);
    double worst = 0.0;
    std::mt19937_64 probe_rng(16);
    for (int p = 0; p < 20; ++p) {
      const Vec x = uniform_vector(probe_rng, 2, -2, 2);
      const Vec e = exact.predict(x);
      worst = std::max(worst, (model.predict(x) - e).norm() / e.norm());
    }
    return worst;
  };
  const double coarse = rel_error(500);
  const double fine = rel_error(8000);
  CHECK(fine < coarse);
  CHECK(fine <= 0.1);
}

TEST_CASE("benchmark-protocol training error magnitudes") {
  // Single seed, full grid search. Medians over seeds are checked in the acceptance suite.
  const auto pendulum = SystemSpec::pendulum();
  SamplingProtocol p;
  p.initial_conditions = {(Vec(2) << 2 * M_PI / 5, 0).finished(), (Vec(2) << 4 * M_PI / 5, 0).finished(),
                          (Vec(2) << 19 * M_PI / 20, -4).finished()};
  p.step = 0.1;
  p.t_end = 0.7;
  const SeedSet seeds = SeedSet::from_master(0);
  const Dataset train = generate_dataset(pendulum, p, {0.01, seeds.noise});
  SearchSpace space{SearchSpace::log_grid(-1, 1, 13), SearchSpace::log_grid(-8, 0, 17), 5};
  const auto cv = cross_validate_helmholtz(train, space, 200, seeds.basis_curl_free, seeds.basis_symplectic,
                                           seeds.cv_shuffle);
  const auto model = fit_helmholtz(train, cv.best, 0);
  CHECK(vector_field_mse(model.field(), train) <= 10 * 0.0007);

  const auto msd = SystemSpec::mass_spring_damper();
  SamplingProtocol q;
  q.initial_conditions = {(Vec(2) << 1, 0).finished(), (Vec(2) << 2.25, 0).finished(),
                          (Vec(2) << 3.5, 0).finished()};
  q.step = 0.25;
  q.t_end = 1.0;
  const Dataset msd_train = generate_dataset(msd, q, {0.1, seeds.noise});
  const auto cvb = cross_validate_baseline(msd_train, space, 200, seeds.basis_baseline, seeds.cv_shuffle);
  const double mse = vector_field_mse(fit_baseline(msd_train, cvb.best, 0).field(), msd_train);
  CHECK(mse >= 0.0496 / 10);
  CHECK(mse <= 0.0496 * 10);
}
