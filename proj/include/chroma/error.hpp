// Copyright 2026 The Chroma Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chroma {

// Base for every error raised by the library. Callers that only care about
// "bad input vs. broken invariant" can catch std::domain_error or
// std::runtime_error instead.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A vector that is not on the sphere within the on-sphere tolerance.
class InvalidPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Radius outside the regime an operation is defined for (e.g. solving the
// large-radius system at R <= sqrt(5)/2).
class RegimeError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Parameters that make a construction meaningless: eps too large, lambda at
// or beyond the critical coefficient, and so on.
class ParameterError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The inverse shrink map has no preimage on the closed half-sphere.
class NoPreimageError : public DomainError {
 public:
  using DomainError::DomainError;
};

class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A hypergraph vertex that no edge contains.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The sampled edges do not cover every vertex. Carries the uncovered set so
// callers can resample.
class IncompleteCoverError : public std::runtime_error {
 public:
  IncompleteCoverError(const std::string& what, std::vector<std::size_t> uncovered)
      : std::runtime_error(what), uncovered_(std::move(uncovered)) {}

  const std::vector<std::size_t>& uncovered() const noexcept { return uncovered_; }

 private:
  std::vector<std::size_t> uncovered_;
};

}  // namespace chroma
