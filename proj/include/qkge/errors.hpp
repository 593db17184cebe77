// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared across the library.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qkge {

/// Base class for all qkge errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Register size outside the supported range, or shape mismatch.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Malformed gate or circuit (bad indices, condition collisions).
class CircuitError : public Error {
  public:
    using Error::Error;
};

/// Unresolved or mismatched circuit parameters.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Dataset file problems (missing file, malformed line).
class DataError : public Error {
  public:
    using Error::Error;
};

/// Unknown entity or relation id/name.
class LookupError : public Error {
  public:
    using Error::Error;
};

/// Negative sampling cannot make progress.
class SamplingError : public Error {
  public:
    using Error::Error;
};

/// Numeric failure during optimization.
class TrainingError : public Error {
  public:
    using Error::Error;
};

/// Invalid run configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Unreadable or version-incompatible checkpoint.
class CheckpointError : public Error {
  public:
    using Error::Error;
};

} // namespace qkge
