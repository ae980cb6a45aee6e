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

#include "helmrff/error.hpp"

namespace helmrff {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(ErrorCode::Parse, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

void require_dim(std::size_t expected, std::size_t actual, const char* context) {
  if (expected != actual) {
    throw DimensionMismatch(std::string(context) + ": expected dimension " +
                            std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

}  // namespace helmrff
