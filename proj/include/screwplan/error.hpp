// Copyright 2026 The screwplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCREWPLAN_ERROR_HPP_
#define SCREWPLAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace screwplan {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (non-unit quaternion,
/// interpolation parameter out of range, wrong joint-vector length, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// JJ^T is singular and no damping was requested.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A planner step could not produce a feasible joint update, even after the
/// sequential single-contact fallback.
class StepFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace screwplan

#endif  // SCREWPLAN_ERROR_HPP_
