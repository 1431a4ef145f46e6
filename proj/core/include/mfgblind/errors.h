// Copyright 2026 The mfgblind Authors
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

#ifndef MFGBLIND_ERRORS_H_
#define MFGBLIND_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mfgblind {

// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what)
      : std::invalid_argument(what) {}
};

// Explicit upwind steps would lose monotonicity (and FP positivity).
class CflViolation : public InvalidArgument {
 public:
  explicit CflViolation(const std::string& what) : InvalidArgument(what) {}
};

// Two fields live on different grids.
class GridMismatch : public InvalidArgument {
 public:
  explicit GridMismatch(const std::string& what) : InvalidArgument(what) {}
};

// No atom of the belief reproduces the observed payment.
class InconsistentObservation : public std::runtime_error {
 public:
  explicit InconsistentObservation(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace mfgblind

#endif  // MFGBLIND_ERRORS_H_
