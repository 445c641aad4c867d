#pragma once

#include <stdexcept>
#include <string>

namespace netdpm {

// Base of every error thrown by the library. The CLI turns these into a
// one-line message and a nonzero exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A data structure whose invariants do not hold.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

// A non-finite or otherwise unusable intermediate value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input files.
class IngestionError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace netdpm
