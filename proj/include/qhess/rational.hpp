#pragma once

// Minimal exact rational arithmetic for the elementary-symmetric-function identity
// checks. Magnitudes stay tiny (n <= 6), so int64 with gcd reduction is plenty.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhess {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n) : num(n), den(1) {}
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::domain_error("Rational: division by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(Rational a, Rational b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(Rational a, Rational b) { return !(a == b); }
  bool positive() const { return num > 0; }
  bool zero() const { return num == 0; }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }
};

// sigma_k of a small rational vector, by the usual product recurrence.
Rational elementary_symmetric(const std::vector<Rational>& xs, int k);

}  // namespace qhess
