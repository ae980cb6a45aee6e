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

#include <cstdint>
#include <random>

namespace helmrff {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds from a parent.
std::uint64_t split_seed(std::uint64_t parent, std::uint64_t stream);

// Seeds derived from one master seed for a full experiment run.
struct SeedSet {
  std::uint64_t master = 0;
  std::uint64_t noise = 0;
  std::uint64_t basis_curl_free = 0;
  std::uint64_t basis_symplectic = 0;
  std::uint64_t cv_shuffle = 0;
  std::uint64_t basis_baseline = 0;

  static SeedSet from_master(std::uint64_t master);
};

}  // namespace helmrff
