// Copyright 2026 The DP-LAC Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLAC_ERROR_H_
#define DPLAC_ERROR_H_

#include <stdexcept>
#include <string>

namespace dplac {

// Precondition or configuration value out of range.
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical domain violation, e.g. a zero noise multiplier handed to the
// RDP computation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The noise-multiplier search could not bracket the target epsilon.
class SearchBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dplac

#endif  // DPLAC_ERROR_H_
