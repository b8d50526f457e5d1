#pragma once

#include <stdexcept>
#include <string>

namespace wnc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/operator dimensions do not match the space.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction data (bad weights, non-spanning generators, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// An exact-mode enumeration would exceed its budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// A solver could not produce a usable result (unbounded LP, absorption
/// failure, overflow in exact arithmetic, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace wnc
