#pragma once

#include <stdexcept>
#include <string>

namespace ladderlab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (wrong dimensions, bad parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

// The numerics could not deliver the contract (eigensolver failure, degeneracy).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Bad configuration or malformed external input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ladderlab
