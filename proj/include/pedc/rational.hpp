#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "pedc/errors.hpp"

namespace pedc {

// Exact nonnegative rational, always in lowest terms. Used for rates and
// for audit distances; never converted to floating point.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    if (d == 0) throw Error("rational with zero denominator");
    std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }

  bool is_zero() const { return num == 0; }

  bool operator==(const Rational&) const = default;

  Rational operator+(const Rational& rhs) const {
    // Small operands only (counts over enumeration sizes); overflow is
    // checked rather than assumed away.
    unsigned __int128 n = static_cast<unsigned __int128>(num) * rhs.den +
                          static_cast<unsigned __int128>(rhs.num) * den;
    unsigned __int128 d = static_cast<unsigned __int128>(den) * rhs.den;
    unsigned __int128 g = gcd128(n, d);
    n /= g;
    d /= g;
    if (n > UINT64_MAX || d > UINT64_MAX) throw Error("rational overflow");
    return Rational(static_cast<std::uint64_t>(n),
                    static_cast<std::uint64_t>(d));
  }

  bool operator<(const Rational& rhs) const {
    return static_cast<unsigned __int128>(num) * rhs.den <
           static_cast<unsigned __int128>(rhs.num) * den;
  }

  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
      unsigned __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

}  // namespace pedc
