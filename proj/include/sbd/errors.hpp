// Copyright 2026 The sbd Authors.
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

namespace sbd {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operand lengths do not satisfy N = L + M - 1 (or an equal-length contract).
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Noise model does not match what the bound requires.
class ModelMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The excitation collapsed to all zeros, so the h-step has no data.
class DegenerateExcitation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// A concentration bound's geometric precondition does not hold.
class BoundInapplicable : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormat : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace sbd
