// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ida {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or inconsistent configuration. CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function. CLI exit code 2.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Grids whose shapes disagree. CLI exit code 3.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input that is well-formed but leaves nothing to work with (e.g. empty label map).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or statistic that cannot be computed from the data.
class DataError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace ida
