// Copyright 2026 The choicoh Authors
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

namespace choicoh {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or subsystem dimensions do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The object violates a mathematical precondition (not Hermitian, not a
/// state, not row-stochastic, not a channel, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class NotFactorizableError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive check would exceed its configured enumeration cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

}  // namespace choicoh
