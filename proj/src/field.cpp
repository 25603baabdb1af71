#include "pedc/field.hpp"

#include <string>

namespace pedc {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) acc = mul_mod(acc, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This base set decides primality exactly for all n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldElement::FieldElement(std::uint64_t value, std::uint64_t modulus)
    : value_(0), modulus_(modulus) {
  if (modulus < 2) {
    throw ModulusMismatchError("field modulus must be >= 2, got " +
                               std::to_string(modulus));
  }
  value_ = value % modulus;
}

void FieldElement::require_same_field(const FieldElement& rhs) const {
  if (modulus_ != rhs.modulus_ || modulus_ == 0) {
    throw ModulusMismatchError("mixed moduli: " + std::to_string(modulus_) +
                               " vs " + std::to_string(rhs.modulus_));
  }
}

FieldElement FieldElement::operator+(const FieldElement& rhs) const {
  require_same_field(rhs);
  std::uint64_t sum = value_ + rhs.value_;  // q < 2^63, no overflow
  if (sum >= modulus_) sum -= modulus_;
  return FieldElement(sum, modulus_);
}

FieldElement FieldElement::operator-(const FieldElement& rhs) const {
  require_same_field(rhs);
  std::uint64_t diff = value_ >= rhs.value_
                           ? value_ - rhs.value_
                           : value_ + (modulus_ - rhs.value_);
  return FieldElement(diff, modulus_);
}

FieldElement FieldElement::operator*(const FieldElement& rhs) const {
  require_same_field(rhs);
  return FieldElement(mul_mod(value_, rhs.value_, modulus_), modulus_);
}

FieldElement FieldElement::operator-() const {
  if (modulus_ == 0) throw ModulusMismatchError("negating unset element");
  return FieldElement(value_ == 0 ? 0 : modulus_ - value_, modulus_);
}

FieldElement FieldElement::inv() const {
  if (modulus_ == 0) throw ModulusMismatchError("inverting unset element");
  if (value_ == 0) {
    throw DivisionByZeroError("inverse of zero in GF(" +
                              std::to_string(modulus_) + ")");
  }
  // Extended Euclid on (value, modulus); signed intermediates are safe
  // because q fits in 63 bits.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(modulus_);
  std::int64_t new_r = static_cast<std::int64_t>(value_);
  while (new_r != 0) {
    std::int64_t quotient = r / new_r;
    std::int64_t tmp = t - quotient * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quotient * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) {
    throw DivisionByZeroError("non-unit under modulus " +
                              std::to_string(modulus_));
  }
  if (t < 0) t += static_cast<std::int64_t>(modulus_);
  return FieldElement(static_cast<std::uint64_t>(t), modulus_);
}

FieldElement FieldElement::pow(std::uint64_t exponent) const {
  if (modulus_ == 0) throw ModulusMismatchError("pow of unset element");
  return FieldElement(pow_mod(value_, exponent, modulus_), modulus_);
}

}  // namespace pedc
