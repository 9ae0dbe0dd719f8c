#pragma once

#include "curvecode/rational.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvecode {

struct Breakpoint {
  Rational x;
  Rational y;
};

class PLFunctionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Continuous piecewise-linear function on [0,1] with exact rational
// breakpoints. Abscissae are strictly increasing, from 0 to 1.
class PLFunction {
 public:
  explicit PLFunction(std::vector<Breakpoint> breakpoints);

  static PLFunction constant(const Rational& c);
  static PLFunction line(const Rational& slope, const Rational& intercept);
  static PLFunction identity() { return line(1, 0); }

  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
  const Rational& max_abs_slope() const noexcept { return max_abs_slope_; }

  // Linear interpolation; exact at breakpoints. x must lie in [0,1].
  Rational operator()(const Rational& x) const;

  // Evaluates at non-decreasing abscissae in one merged pass.
  std::vector<Rational> sample(std::span<const Rational> xs) const;

 private:
  std::vector<Breakpoint> breakpoints_;
  Rational max_abs_slope_;
};

// max over [0,1] of |f - g|, exact: the difference is linear between
// consecutive points of the merged breakpoint set.
Rational sup_distance(const PLFunction& f, const PLFunction& g);

// Two-column text, "x y" per line; '#' starts a comment line.
PLFunction read_pl_function(std::istream& in);
PLFunction load_pl_function(const std::string& path);
void write_pl_function(std::ostream& out, const PLFunction& f);

}  // namespace curvecode
