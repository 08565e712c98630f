// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tangleforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON, masks outside the ground set, bad labels.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

// An exhaustive search exceeded its node or size budget.
class SearchSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

// A proven invariant failed at runtime. Either a bug or an input that is not
// what it claims to be (e.g. a table that is not submodular).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Parts that overlap, miss elements, or leave the ground set.
class NotAPartition : public Error {
 public:
  using Error::Error;
};

// Search budget for exhaustive branching. TANGLEFORGE_MAX_NODES overrides.
inline long long SearchNodeCap(long long fallback = 1LL << 20) {
  if (const char* env = std::getenv("TANGLEFORGE_MAX_NODES")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return fallback;
}

}  // namespace tangleforge
