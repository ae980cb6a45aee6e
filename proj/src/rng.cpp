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

#include "helmrff/rng.hpp"

namespace helmrff {

std::uint64_t split_seed(std::uint64_t parent, std::uint64_t stream) {
  std::uint64_t z = parent + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SeedSet SeedSet::from_master(std::uint64_t master) {
  SeedSet s;
  s.master = master;
  s.noise = split_seed(master, 0);
  s.basis_curl_free = split_seed(master, 1);
  s.basis_symplectic = split_seed(master, 2);
  s.cv_shuffle = split_seed(master, 3);
  s.basis_baseline = split_seed(master, 4);
  return s;
}

}  // namespace helmrff
