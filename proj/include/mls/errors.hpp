#pragma once

#include <stdexcept>
#include <string>

namespace mls {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point lies on or outside the boundary of the map/potential domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// An iterative solve exhausted its iteration budget without converging.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Matrix input with an invalid shape (e.g. non-square cost matrix).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Mismatched sizes between two collections.
class SizeError : public Error {
 public:
  using Error::Error;
};

// An operation received an empty collection.
class EmptyError : public Error {
 public:
  using Error::Error;
};

// Nonpositive (or otherwise invalid) barrier weights.
class WeightError : public Error {
 public:
  using Error::Error;
};

// A strong-convexity parameter alpha <= 0 where alpha > 0 is required.
class AlphaError : public Error {
 public:
  using Error::Error;
};

// Config file is syntactically invalid; message carries the line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Config parsed but violates an invariant; message names the field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// A rejection sampler exhausted its proposal budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace mls
