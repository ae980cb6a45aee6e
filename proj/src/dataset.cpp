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

#include "helmrff/dataset.hpp"

#include <string>

#include "helmrff/error.hpp"

namespace helmrff {

void Dataset::validate() const {
  if (states.rows() < 1) throw InvalidArgument("dataset needs at least one sample");
  if (states.rows() != derivatives.rows()) {
    throw DimensionMismatch("dataset has " + std::to_string(states.rows()) + " states but " +
                            std::to_string(derivatives.rows()) + " derivatives");
  }
  require_dim(static_cast<std::size_t>(states.cols()), static_cast<std::size_t>(derivatives.cols()),
              "dataset derivative width");
  if (!times.empty() && times.size() != size()) {
    throw DimensionMismatch("dataset time column length differs from sample count");
  }
  if (!trajectory.empty() && trajectory.size() != size()) {
    throw DimensionMismatch("dataset trajectory column length differs from sample count");
  }
  if (!states.allFinite() || !derivatives.allFinite()) {
    throw InvalidArgument("dataset contains non-finite values");
  }
}

Vector Dataset::stacked_targets() const {
  const Matrix transposed = derivatives.transpose();
  return Eigen::Map<const Vector>(transposed.data(), transposed.size());
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  const auto count = static_cast<Eigen::Index>(indices.size());
  out.states.resize(count, states.cols());
  out.derivatives.resize(count, derivatives.cols());
  for (Eigen::Index r = 0; r < count; ++r) {
    const auto i = static_cast<Eigen::Index>(indices[static_cast<std::size_t>(r)]);
    if (i >= states.rows()) throw InvalidArgument("dataset subset index out of range");
    out.states.row(r) = states.row(i);
    out.derivatives.row(r) = derivatives.row(i);
    if (!times.empty()) out.times.push_back(times[static_cast<std::size_t>(i)]);
    if (!trajectory.empty()) out.trajectory.push_back(trajectory[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace helmrff
