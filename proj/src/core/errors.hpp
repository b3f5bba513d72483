#pragma once

#include <stdexcept>
#include <string>

namespace hybridloc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent caller input (bad dimensions, NaN, bad config).
class InvalidInputError : public Error {
public:
  explicit InvalidInputError(const std::string& what) : Error(what) {}
};

// Structurally valid input that carries no usable signal (all-zero matrix,
// zero column, singular regression).
class DegenerateInputError : public Error {
public:
  explicit DegenerateInputError(const std::string& what) : Error(what) {}
};

// Non-finite value produced while iterating.
class NumericalFailureError : public Error {
public:
  explicit NumericalFailureError(const std::string& what) : Error(what) {}
};

// Request outside the supported envelope (e.g. exhaustive search for large N).
class UnsupportedError : public Error {
public:
  explicit UnsupportedError(const std::string& what) : Error(what) {}
};

}  // namespace hybridloc
