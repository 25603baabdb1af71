#pragma once

#include <stdexcept>
#include <string>

namespace pedc {

// Base type for every contract violation this library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arithmetic between elements of different fields.
struct ModulusMismatchError : Error {
  using Error::Error;
};

// Inverse of zero (or of a non-unit under a composite modulus).
struct DivisionByZeroError : Error {
  using Error::Error;
};

// Shape or index violations: wrong vector length, non-square matrix,
// missing user share, mismatched party ids.
struct DimensionError : Error {
  using Error::Error;
};

// Reported by solve_linear when elimination finds no usable pivot.
struct SingularMatrixError : Error {
  using Error::Error;
};

// Configuration with E >= N-1: correctness and user privacy cannot
// coexist with positive rate, so no scheme exists.
struct InfeasibleConfigError : Error {
  using Error::Error;
};

// q < N + L: not enough field values to pick N evaluation points whose
// shifts by 1..L all stay nonzero.
struct FieldTooSmallError : Error {
  using Error::Error;
};

struct NotPrimeError : Error {
  using Error::Error;
};

// An audit whose predicted enumeration size exceeds the allowed budget
// refuses to run instead of silently sampling.
struct BudgetExceededError : Error {
  using Error::Error;
};

// Coefficient pair handed to the collector-privacy audit is linearly
// dependent (the constraint only quantifies over independent pairs).
struct InvalidPairError : Error {
  using Error::Error;
};

}  // namespace pedc
