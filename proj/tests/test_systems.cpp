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
#include <string>

#include "helmrff/error.hpp"
#include "helmrff/systems.hpp"
#include "support.hpp"

using namespace helmrff;
using namespace helmrff::test;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

SamplingProtocol msd_protocol() {
  SamplingProtocol p;
  p.initial_conditions = {v2(1, 0), v2(2.25, 0), v2(3.5, 0)};
  p.step = 0.25;
  p.t_end = 1.0;
  return p;
}

SamplingProtocol pendulum_protocol() {
  SamplingProtocol p;
  p.initial_conditions = {v2(2 * M_PI / 5, 0), v2(4 * M_PI / 5, 0), v2(19 * M_PI / 20, -4)};
  p.step = 0.1;
  p.t_end = 0.7;
  return p;
}

// Closed-form underdamped oscillator: m q'' + c q' + k q = 0 with p = m q'.
Vec msd_exact(const Vec& x0, double t, const MsdParameters& mp) {
  const double gamma = mp.damping / (2 * mp.mass);
  const double w0sq = mp.stiffness / mp.mass;
  const double wd = std::sqrt(w0sq - gamma * gamma);
  const double q0 = x0(0);
  const double v0 = x0(1) / mp.mass;
  const double a = q0;
  const double b = (v0 + gamma * q0) / wd;
  const double e = std::exp(-gamma * t);
  const double q = e * (a * std::cos(wd * t) + b * std::sin(wd * t));
  const double v = e * (-gamma * (a * std::cos(wd * t) + b * std::sin(wd * t)) +
                        (-a * wd * std::sin(wd * t) + b * wd * std::cos(wd * t)));
  return v2(q, mp.mass * v);
}

}  // namespace

TEST_CASE("mass-spring-damper field") {
  const MsdParameters p;
  CHECK(msd_field(v2(0, 0), p).norm() == 0.0);
  CHECK((msd_field(v2(1, 0), p) - v2(0, -1)).norm() == 0.0);
  CHECK((msd_field(v2(0, 1), p) - v2(2, -0.5)).norm() == 0.0);
  CHECK_THROWS_AS(msd_field(Vec::Zero(3), p), DimensionMismatch);
  CHECK(msd_hamiltonian(v2(1, 1), p) == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("pendulum field") {
  const PendulumParameters p;
  CHECK(pendulum_field(v2(0, 0), p).norm() == 0.0);
  const Vec f = pendulum_field(v2(M_PI / 2, 0), p);
  CHECK(f(0) == 0.0);
  CHECK(f(1) == doctest::Approx(-9.81).epsilon(1e-15));
  const Vec inverted = pendulum_field(v2(M_PI, 0), p);
  CHECK(std::abs(inverted(1)) < 1e-14);
  CHECK(inverted(0) == 0.0);
  CHECK(pendulum_hamiltonian(v2(0, 0), p) == 0.0);
}

TEST_CASE("system specs reject invalid parameters") {
  CHECK_THROWS_AS(SystemSpec::mass_spring_damper({0.0, 1.0, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(SystemSpec::mass_spring_damper({1.0, -1.0, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(SystemSpec::mass_spring_damper({1.0, 1.0, -0.1}), InvalidArgument);
  CHECK_THROWS_AS(SystemSpec::pendulum({1.0, 0.0, 1.2, 9.81}), InvalidArgument);
  const auto msd = SystemSpec::mass_spring_damper();
  CHECK(msd.name() == "msd");
  CHECK((msd.vector_field()(v2(1, 0)) - v2(0, -1)).norm() == 0.0);
  CHECK(SystemSpec::pendulum().name() == "pendulum");
}

TEST_CASE("RK4 trivial fields") {
  const Vec x0 = v2(0.3, -0.7);
  const auto still = integrate_rk4([](const Vector& x) -> Vector { return Vector::Zero(x.size()); }, x0, 0.1, 1.0);
  REQUIRE(still.size() == 11);
  for (Eigen::Index k = 0; k < still.states.rows(); ++k) CHECK((still.states.row(k).transpose() - x0).norm() == 0.0);

  const auto drift = integrate_rk4([](const Vector&) -> Vector { return Vector::Ones(2); }, x0, 0.125, 2.0);
  for (std::size_t k = 0; k < drift.size(); ++k) {
    const double t = drift.times[k];
    CHECK(t == doctest::Approx(0.125 * static_cast<double>(k)).epsilon(1e-15));
    CHECK((drift.states.row(static_cast<Eigen::Index>(k)).transpose() - (x0 + v2(t, t))).norm() <= 1e-14);
  }
}

TEST_CASE("RK4 preconditions and blow-up diagnostics") {
  auto f = [](const Vector& x) -> Vector { return x; };
  CHECK_THROWS_AS(integrate_rk4(f, v2(1, 0), 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_rk4(f, v2(1, 0), 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_rk4(f, v2(1, 0), 0.1, 1.0, 0), InvalidArgument);
  auto explode = [](const Vector& x) -> Vector { return x.array().square() * 1e6; };
  try {
    integrate_rk4(explode, v2(10, 10), 0.5, 50.0);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("undamped oscillator conserves energy under fine RK4") {
  const MsdParameters p{0.5, 1.0, 0.0};
  const auto sys = SystemSpec::mass_spring_damper(p);
  const Vec x0 = v2(1.0, 0.0);
  const auto traj = integrate_rk4(sys.vector_field(), x0, 0.001, 10.0);
  const double h0 = sys.hamiltonian(x0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < traj.states.rows(); ++k) {
    worst = std::max(worst, std::abs(sys.hamiltonian(traj.states.row(k).transpose()) - h0) / h0);
  }
  CHECK(worst <= 1e-6);
  // Analytic solution q = cos(w t), w = sqrt(k/m).
  const double w = std::sqrt(2.0);
  CHECK(traj.states(traj.states.rows() - 1, 0) == doctest::Approx(std::cos(w * 10.0)).epsilon(1e-8));
}

TEST_CASE("damped systems lose energy along fine rollouts") {
  for (const auto& sys : {SystemSpec::mass_spring_damper(), SystemSpec::pendulum()}) {
    const auto traj = integrate_rk4(sys.vector_field(), v2(1.5, 0.5), 0.001, 5.0);
    for (Eigen::Index k = 0; k + 1 < traj.states.rows(); ++k) {
      const double a = sys.hamiltonian(traj.states.row(k).transpose());
      const double b = sys.hamiltonian(traj.states.row(k + 1).transpose());
      REQUIRE(b <= a + 1e-9);
    }
  }
}

TEST_CASE("RK4 is fourth order on the MSD") {
  const auto sys = SystemSpec::mass_spring_damper();
  const Vec x0 = v2(2.0, 0.0);
  const Vec exact = msd_exact(x0, 1.0, MsdParameters{});
  const Vec reference = integrate_rk4(sys.vector_field(), x0, 1e-5, 1.0).states.bottomRows(1).transpose();
  CHECK((reference - exact).norm() <= 1e-12);
  const Vec coarse = integrate_rk4(sys.vector_field(), x0, 0.1, 1.0).states.bottomRows(1).transpose();
  const Vec fine = integrate_rk4(sys.vector_field(), x0, 0.05, 1.0).states.bottomRows(1).transpose();
  CHECK((coarse - reference).norm() / (fine - reference).norm() >= 12.0);
}

TEST_CASE("substeps match a fine integration sampled on the coarse grid") {
  const auto sys = SystemSpec::pendulum();
  const auto coarse = integrate_rk4(sys.vector_field(), v2(1, 0), 0.1, 0.7, 25);
  const auto fine = integrate_rk4(sys.vector_field(), v2(1, 0), 0.004, 0.7);
  REQUIRE(coarse.size() == 8);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(25 * k);
    CHECK((coarse.states.row(static_cast<Eigen::Index>(k)) - fine.states.row(r)).norm() <= 1e-12);
  }
}

TEST_CASE("dataset counts for both protocols") {
  const auto msd = generate_dataset(SystemSpec::mass_spring_damper(), msd_protocol(), {0.1, 1});
  CHECK(msd.size() == 15);
  const auto pend = generate_dataset(SystemSpec::pendulum(), pendulum_protocol(), {0.01, 1});
  CHECK(pend.size() == 24);
  auto without_t0 = pendulum_protocol();
  without_t0.include_t0 = false;
  CHECK(generate_dataset(SystemSpec::pendulum(), without_t0, {0.0, 1}).size() == 21);
  CHECK(msd.trajectory.size() == 15);
  CHECK(msd.trajectory[0] == 0);
  CHECK(msd.trajectory[14] == 2);
  CHECK(msd.times[4] == 1.0);
}

TEST_CASE("noiseless datasets lie on the integrated trajectories") {
  const auto sys = SystemSpec::pendulum();
  const auto protocol = pendulum_protocol();
  const auto data = generate_dataset(sys, protocol, {0.0, 5});
  Eigen::Index row = 0;
  for (const auto& x0 : protocol.initial_conditions) {
    const auto traj = integrate_rk4(sys.vector_field(), x0, protocol.step, protocol.t_end, protocol.substeps);
    for (Eigen::Index k = 0; k < traj.states.rows(); ++k, ++row) {
      CHECK((data.states.row(row) - traj.states.row(k)).norm() == 0.0);
      CHECK((data.derivatives.row(row).transpose() - sys.field(traj.states.row(k).transpose())).norm() == 0.0);
    }
  }
}

TEST_CASE("noise statistics and determinism") {
  const auto sys = SystemSpec::mass_spring_damper();
  auto protocol = msd_protocol();
  protocol.initial_conditions.assign(200, v2(1, 0));
  const auto clean = generate_dataset(sys, protocol, {0.0, 3});
  const auto noisy = generate_dataset(sys, protocol, {0.1, 3});
  const auto again = generate_dataset(sys, protocol, {0.1, 3});
  const auto other = generate_dataset(sys, protocol, {0.1, 4});
  CHECK(noisy.states == again.states);
  CHECK(noisy.derivatives == again.derivatives);
  CHECK(noisy.states != other.states);
  const Mat ds = noisy.states - clean.states;
  const Mat dd = noisy.derivatives - clean.derivatives;
  const double n = static_cast<double>(ds.size());
  CHECK(std::abs(std::sqrt(ds.squaredNorm() / n) - 0.1) < 0.01);
  CHECK(std::abs(std::sqrt(dd.squaredNorm() / n) - 0.1) < 0.01);
  CHECK(std::abs(ds.mean()) < 0.01);
  // Trajectories draw from separate streams.
  CHECK(ds.row(0) != ds.row(5));
}

TEST_CASE("dataset generation preconditions") {
  SamplingProtocol empty = msd_protocol();
  empty.initial_conditions.clear();
  CHECK_THROWS_AS(generate_dataset(SystemSpec::mass_spring_damper(), empty, {0.1, 1}), InvalidArgument);
  CHECK_THROWS_AS(generate_dataset(SystemSpec::mass_spring_damper(), msd_protocol(), {-0.1, 1}), InvalidArgument);
  SamplingProtocol bad_dim = msd_protocol();
  bad_dim.initial_conditions.push_back(Vec::Zero(3));
  CHECK_THROWS_AS(generate_dataset(SystemSpec::mass_spring_damper(), bad_dim, {0.1, 1}), DimensionMismatch);
}
