#pragma once

// Exact rational arithmetic shared by every module. Abscissae, sample values,
// resolutions and frequencies are all carried as GMP rationals so that the
// half-open cell convention is decided exactly.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curvecode {

using Rational = mpq_class;

// Symbols of codes and words. Cell indices live in the same type.
using Symbol = std::int64_t;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts "p/q", integers and plain decimals ("-0.05", "3.", ".25").
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

// Largest integer not exceeding value. Throws std::overflow_error when the
// result does not fit into Symbol.
Symbol floor_to_symbol(const Rational& value);

// Smallest integer not below value.
Symbol ceil_to_symbol(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

inline Rational abs_rational(const Rational& value) {
  return value < 0 ? Rational(-value) : value;
}

double to_double(const Rational& value);

}  // namespace curvecode
