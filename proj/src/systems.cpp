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

#include "helmrff/systems.hpp"

#include <cmath>
#include <random>

#include "helmrff/error.hpp"
#include "helmrff/rng.hpp"

namespace helmrff {

namespace {

void require_planar(const Vector& x, const char* context) {
  require_dim(2, static_cast<std::size_t>(x.size()), context);
}

}  // namespace

Vector msd_field(const Vector& x, const MsdParameters& params) {
  require_planar(x, "msd_field");
  const double q = x(0);
  const double p = x(1);
  Vector out(2);
  out << p / params.mass, -params.stiffness * q - (params.damping / params.mass) * p;
  return out;
}

Vector pendulum_field(const Vector& x, const PendulumParameters& params) {
  require_planar(x, "pendulum_field");
  const double q = x(0);
  const double p = x(1);
  const double inertia = params.mass * params.length * params.length;
  Vector out(2);
  out << p / inertia, -params.mass * params.gravity * params.length * std::sin(q) - (params.damping / inertia) * p;
  return out;
}

double msd_hamiltonian(const Vector& x, const MsdParameters& params) {
  require_planar(x, "msd_hamiltonian");
  return 0.5 * x(1) * x(1) / params.mass + 0.5 * params.stiffness * x(0) * x(0);
}

double pendulum_hamiltonian(const Vector& x, const PendulumParameters& params) {
  require_planar(x, "pendulum_hamiltonian");
  const double inertia = params.mass * params.length * params.length;
  return x(1) * x(1) / (2.0 * inertia) + params.mass * params.gravity * params.length * (1.0 - std::cos(x(0)));
}

SystemSpec::SystemSpec(std::string name, std::variant<MsdParameters, PendulumParameters> params)
    : name_(std::move(name)), params_(params) {}

SystemSpec SystemSpec::mass_spring_damper(MsdParameters params) {
  if (!(params.mass > 0.0) || !(params.stiffness > 0.0) || !(params.damping >= 0.0)) {
    throw InvalidArgument("mass-spring-damper needs m > 0, k > 0, d >= 0");
  }
  return SystemSpec("msd", params);
}

SystemSpec SystemSpec::pendulum(PendulumParameters params) {
  if (!(params.mass > 0.0) || !(params.length > 0.0) || !(params.damping >= 0.0) ||
      !std::isfinite(params.gravity)) {
    throw InvalidArgument("pendulum needs m > 0, l > 0, d >= 0 and finite g");
  }
  return SystemSpec("pendulum", params);
}

Vector SystemSpec::field(const Vector& x) const {
  if (const auto* msd = std::get_if<MsdParameters>(&params_)) return msd_field(x, *msd);
  return pendulum_field(x, std::get<PendulumParameters>(params_));
}

double SystemSpec::hamiltonian(const Vector& x) const {
  if (const auto* msd = std::get_if<MsdParameters>(&params_)) return msd_hamiltonian(x, *msd);
  return pendulum_hamiltonian(x, std::get<PendulumParameters>(params_));
}

VectorField SystemSpec::vector_field() const {
  return [system = *this](const Vector& x) { return system.field(x); };
}

Trajectory integrate_rk4(const VectorField& field, const Vector& x0, double h, double t_end, std::size_t substeps) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("integration step must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("integration horizon must be positive");
  if (substeps < 1) throw InvalidArgument("substeps must be >= 1");
  const double ratio = t_end / h;
  if (ratio < 1.0 - 1e-9) {
    throw InvalidArgument("integration step " + std::to_string(h) + " exceeds horizon " + std::to_string(t_end));
  }
  // Tolerate t_end / h landing a hair under an integer (0.7 / 0.1 = 6.999...).
  const auto steps = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  const double dt = h / static_cast<double>(substeps);

  Trajectory out;
  out.times.reserve(steps + 1);
  out.states.resize(static_cast<Eigen::Index>(steps + 1), x0.size());
  Vector x = x0;
  out.times.push_back(0.0);
  out.states.row(0) = x.transpose();
  for (std::size_t k = 1; k <= steps; ++k) {
    for (std::size_t s = 0; s < substeps; ++s) {
      const Vector k1 = field(x);
      const Vector k2 = field(x + 0.5 * dt * k1);
      const Vector k3 = field(x + 0.5 * dt * k2);
      const Vector k4 = field(x + dt * k3);
      x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!x.allFinite()) {
      throw NumericalError("integrator produced a non-finite state at step " + std::to_string(k));
    }
    out.times.push_back(static_cast<double>(k) * h);
    out.states.row(static_cast<Eigen::Index>(k)) = x.transpose();
  }
  return out;
}

Dataset generate_dataset(const SystemSpec& system, const SamplingProtocol& protocol, const NoiseSpec& noise) {
  if (protocol.initial_conditions.empty()) throw InvalidArgument("dataset generation needs an initial condition");
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) throw InvalidArgument("noise sigma must be >= 0");

  const auto field = system.vector_field();
  std::vector<Trajectory> runs;
  Eigen::Index total = 0;
  for (const auto& x0 : protocol.initial_conditions) {
    runs.push_back(integrate_rk4(field, x0, protocol.step, protocol.t_end, protocol.substeps));
    total += runs.back().states.rows() - (protocol.include_t0 ? 0 : 1);
  }
  const Eigen::Index n = protocol.initial_conditions.front().size();

  Dataset out;
  out.states.resize(total, n);
  out.derivatives.resize(total, n);
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < runs.size(); ++j) {
    Engine engine(split_seed(noise.seed, j));
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto& run = runs[j];
    for (Eigen::Index k = protocol.include_t0 ? 0 : 1; k < run.states.rows(); ++k, ++row) {
      const Vector x = run.states.row(k).transpose();
      const Vector xdot = system.field(x);
      for (Eigen::Index c = 0; c < n; ++c) out.states(row, c) = x(c) + noise.sigma * normal(engine);
      for (Eigen::Index c = 0; c < n; ++c) out.derivatives(row, c) = xdot(c) + noise.sigma * normal(engine);
      out.times.push_back(run.times[static_cast<std::size_t>(k)]);
      out.trajectory.push_back(static_cast<int>(j));
    }
  }
  return out;
}

}  // namespace helmrff
