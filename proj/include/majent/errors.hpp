#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace majent {

// Base for every error raised by the library. Domain errors (a mathematical
// precondition does not hold) derive from DomainError; malformed data or I/O
// problems derive from FormatError. The CLI maps the two onto exit codes 1/2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public DomainError {
 public:
  using DomainError::DomainError;
};

class DimensionMismatch : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Raised when a ≺ b was required but does not hold. Carries the first
/// violated prefix (1-based k) when there is one, k == 0 when only the totals
/// disagree.
class MajorizationFailed : public DomainError {
 public:
  MajorizationFailed(const std::string& what, std::size_t k, double lhs, double rhs)
      : DomainError(what), k_(k), lhs_(lhs), rhs_(rhs) {}
  std::size_t k() const noexcept { return k_; }
  double lhs() const noexcept { return lhs_; }
  double rhs() const noexcept { return rhs_; }

 private:
  std::size_t k_;
  double lhs_;
  double rhs_;
};

class NotDoublyStochastic : public DomainError {
 public:
  using DomainError::DomainError;
};

class MatchingFailed : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotOrthogonal : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotUnitary : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotUnitVector : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotTracePreserving : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotUnital : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Hermiticity failure, reporting the entry pair (row, col) with the largest
/// |A(row,col) - conj(A(col,row))|.
class NotHermitian : public DomainError {
 public:
  NotHermitian(const std::string& what, std::size_t row, std::size_t col, double deviation)
      : DomainError(what), row_(row), col_(col), deviation_(deviation) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::size_t row_;
  std::size_t col_;
  double deviation_;
};

/// A matrix that is Hermitian but is not a valid state (negative eigenvalue
/// or trace away from 1).
class InvalidState : public DomainError {
 public:
  using DomainError::DomainError;
};

class SchemaError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace majent
