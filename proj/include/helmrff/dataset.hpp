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
#include <functional>
#include <span>
#include <vector>

#include "helmrff/kernels.hpp"

namespace helmrff {

/// A vector field x -> xdot.
using VectorField = std::function<Vector(const Vector&)>;

/// N samples (x_i, xdot_i) stored as rows. times/trajectory are optional provenance
/// columns carried through to CSV output; they are either empty or have N entries.
struct Dataset {
  Matrix states;
  Matrix derivatives;
  std::vector<double> times;
  std::vector<int> trajectory;

  std::size_t size() const noexcept { return static_cast<std::size_t>(states.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(states.cols()); }

  /// Throws InvalidArgument / DimensionMismatch when the invariants do not hold.
  void validate() const;

  /// Targets stacked as [xdot_1; ...; xdot_N] (length nN).
  Vector stacked_targets() const;

  Dataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace helmrff
