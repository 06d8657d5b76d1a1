#pragma once

#include <stdexcept>
#include <string>

namespace nhs {

/// Malformed or inconsistent input data (CSV, JSON artifacts, bounds).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a result (e.g. singular solve).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments from the caller: wrong dimensions, invalid options.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace nhs
