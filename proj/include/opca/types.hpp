// Copyright 2026 The opca authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OPCA_TYPES_HPP
#define OPCA_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace opca {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Base class for all recoverable failures raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix expected to have full column rank numerically does not.
struct RankDeficientError : Error {
  using Error::Error;
};

// A Gram matrix X^T X lost positive definiteness (Cholesky pivot underflow).
struct GramSingularError : Error {
  using Error::Error;
};

struct NotSquareError : Error {
  using Error::Error;
};

struct NonFiniteError : Error {
  using Error::Error;
};

// A numeric or size parameter is outside its admissible range.
struct BadRangeError : Error {
  using Error::Error;
};

// Malformed input file; `byte_offset` points at the offending location.
struct ParseError : Error {
  ParseError(const std::string& what, long long byte_offset)
      : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
        offset(byte_offset) {}
  long long offset;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

// A spectral assumption (eigengap) required by the estimator is violated.
struct AssumptionViolatedError : Error {
  using Error::Error;
};

// Traces being aggregated were recorded on different step grids.
struct GridMismatchError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace opca

#endif  // OPCA_TYPES_HPP
