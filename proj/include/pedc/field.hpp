#pragma once

#include <cstdint>

#include "pedc/errors.hpp"

namespace pedc {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// One symbol of GF(q). The modulus travels with the value; combining
// elements of different fields is a hard error, never a coercion.
// All arithmetic is exact; none of it is constant-time.
class FieldElement {
 public:
  // Unusable sentinel (modulus 0); any arithmetic with it throws.
  FieldElement() = default;

  // Reduces value mod modulus. modulus must be >= 2; primality is
  // enforced where parameters are validated, not per element.
  FieldElement(std::uint64_t value, std::uint64_t modulus);

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& rhs) const;
  FieldElement operator-(const FieldElement& rhs) const;
  FieldElement operator*(const FieldElement& rhs) const;
  FieldElement operator-() const;

  // Multiplicative inverse via extended Euclid; zero input throws
  // DivisionByZeroError.
  FieldElement inv() const;

  FieldElement pow(std::uint64_t exponent) const;

  bool operator==(const FieldElement&) const = default;

 private:
  void require_same_field(const FieldElement& rhs) const;

  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 0;
};

inline FieldElement zero(std::uint64_t q) { return FieldElement(0, q); }
inline FieldElement one(std::uint64_t q) { return FieldElement(1, q); }

}  // namespace pedc
