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
#include <string>
#include <variant>
#include <vector>

#include "helmrff/dataset.hpp"

namespace helmrff {

/// qdot = p/m, pdot = -k q - (d/m) p.
struct MsdParameters {
  double mass = 0.5;
  double stiffness = 1.0;
  double damping = 0.25;
};

/// qdot = p/(m l^2), pdot = -m g l sin q - d/(m l^2) p.
struct PendulumParameters {
  double mass = 1.0;
  double length = 1.0;
  double damping = 1.2;
  double gravity = 9.81;
};

Vector msd_field(const Vector& x, const MsdParameters& params);
Vector pendulum_field(const Vector& x, const PendulumParameters& params);
double msd_hamiltonian(const Vector& x, const MsdParameters& params);
double pendulum_hamiltonian(const Vector& x, const PendulumParameters& params);

/// One of the two benchmark systems.
class SystemSpec {
 public:
  static SystemSpec mass_spring_damper(MsdParameters params = {});
  static SystemSpec pendulum(PendulumParameters params = {});

  const std::string& name() const noexcept { return name_; }
  const std::variant<MsdParameters, PendulumParameters>& parameters() const noexcept { return params_; }

  Vector field(const Vector& x) const;
  double hamiltonian(const Vector& x) const;
  VectorField vector_field() const;

 private:
  SystemSpec(std::string name, std::variant<MsdParameters, PendulumParameters> params);

  std::string name_;
  std::variant<MsdParameters, PendulumParameters> params_;
};

/// Uniformly sampled trajectory; states are rows, times[k] = k h.
struct Trajectory {
  std::vector<double> times;
  Matrix states;

  std::size_t size() const noexcept { return times.size(); }
};

/// Classical fixed-step RK4 from t = 0 to t_end, recording every step (t = 0 included).
/// With substeps > 1 each recorded step is integrated as substeps RK4 steps of h / substeps.
/// Throws NumericalError naming the step if the state becomes non-finite.
Trajectory integrate_rk4(const VectorField& field, const Vector& x0, double h, double t_end,
                         std::size_t substeps = 1);

struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Where and how a training set is sampled from the true system.
struct SamplingProtocol {
  std::vector<Vector> initial_conditions;
  double step = 0.1;
  double t_end = 1.0;
  bool include_t0 = true;
  std::size_t substeps = 25;
};

/// Integrates each initial condition, records (x, f(x)) at the grid times, then adds
/// i.i.d. N(0, sigma^2) noise to both. Trajectory j draws its noise from
/// split_seed(noise.seed, j).
Dataset generate_dataset(const SystemSpec& system, const SamplingProtocol& protocol, const NoiseSpec& noise);

}  // namespace helmrff
