#pragma once

#include <stdexcept>
#include <string>

namespace perilimit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch, unsupported dimension, non-square input.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A limit or iteration that was required to converge did not.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace perilimit
