#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "polyprophet/errors.hpp"

namespace polyprophet {

// Exact rational with int64 numerator/denominator, always normalized with
// den > 0. Only the handful of operations the scaling wrapper needs.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }
  static Rational integer(int64_t n) { return Rational(n, 1); }

  void normalize() {
    if (den == 0) throw ValidationError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

  bool is_integer() const { return den == 1; }

  // num * s / den, requiring exact divisibility (s a multiple of den).
  int64_t scaled(int64_t s) const {
    if (s % den != 0) throw ValidationError("scale not a multiple of denominator");
    return num * (s / den);
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  // Parses "3", "-3", "3/4", or a plain decimal such as "0.125".
  static Rational parse(const std::string& text);
};

// Least common multiple with overflow guard; used to find the scale of a
// rational table.
int64_t lcm_checked(int64_t a, int64_t b);

}  // namespace polyprophet
