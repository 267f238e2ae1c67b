// Copyright 2026 The qvlasov Authors
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

#include <stdexcept>
#include <string>

namespace qvlasov {

/// Raised when a simulation leaves the regime the method is valid in
/// (velocity content wrapping modularly, a CFL counter escaping (-1, 1),
/// quantum and classical pipelines disagreeing). The CLI maps it to exit 2.
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Content of column j would be shifted across the k = 0 / k = N_v - 1 edge.
class WrapViolation : public PhysicsError {
 public:
  WrapViolation(std::size_t column, long long shift)
      : PhysicsError("velocity wrap violation at column j=" +
                     std::to_string(column) + " for shift " +
                     std::to_string(shift)),
        column_(column),
        shift_(shift) {}

  std::size_t column() const noexcept { return column_; }
  long long shift() const noexcept { return shift_; }

 private:
  std::size_t column_;
  long long shift_;
};

/// A postselected outcome has zero probability.
class PostselectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration. The CLI maps it to exit 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qvlasov
