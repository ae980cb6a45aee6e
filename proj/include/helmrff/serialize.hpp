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

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "helmrff/evaluation.hpp"
#include "helmrff/regression.hpp"
#include "helmrff/rng.hpp"
#include "helmrff/systems.hpp"

namespace helmrff {

using nlohmann::json;

// JSON documents. Doubles are written with round-trip precision, so a model read
// back predicts bit-identically. Readers throw ParseError on malformed input.

json to_json(const FeatureBasis& basis);
FeatureBasis basis_from_json(const json& doc);

json to_json(const Hyperparameters& hyper);
Hyperparameters hyper_from_json(const json& doc);

json to_json(const SeedSet& seeds);
SeedSet seeds_from_json(const json& doc);

/// {"type": "helmholtz", hyper, basis_curl_free, basis_symplectic, alpha[], beta[]}
json to_json(const HelmholtzModel& model);
HelmholtzModel helmholtz_from_json(const json& doc);

/// {"type": "gaussian-separable", hyper, basis, alpha[]}
json to_json(const BaselineModel& model);
BaselineModel baseline_from_json(const json& doc);

json to_json(const Dataset& dataset);
Dataset dataset_from_json(const json& doc);

json to_json(const EvalReport& report);

// CSV. `meta`, when given, is written as a leading "# {...}" comment line.

/// Header t,q,p,qdot,pdot,traj_id (planar datasets only).
std::string dataset_csv(const Dataset& dataset, const json* meta = nullptr);
Dataset dataset_from_csv(std::string_view text);

/// Header traj_id,t,q,p.
std::string trajectory_csv(const std::vector<Trajectory>& runs, const json* meta = nullptr);

/// Header q,p,qdot,pdot.
std::string grid_csv(const StreamGrid& grid, const json* meta = nullptr);
std::string points_csv(const Matrix& points, const Matrix& values, const json* meta = nullptr);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Dataset from .json or .csv, chosen by extension.
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace helmrff
