#pragma once

// Discretization systems of [0,1]: nested finite point sets X_1 ⊂ X_2 ⊂ ...
// containing both endpoints, plus the uniform image grid of step h_n.
//
// Levels are numbered from 1. Points inside a level are indexed from 0.

#include "curvecode/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvecode {

enum class GridErrorKind {
  InvalidArgument,
  NotNested,
  NotSorted,
  MissingEndpoint,
  NotRefining,
  UnknownLevel,
};

class GridError : public std::runtime_error {
 public:
  GridError(GridErrorKind kind, int level, const std::string& what, int line = 0)
      : std::runtime_error(what), kind_(kind), level_(level), line_(line) {}

  GridErrorKind kind() const noexcept { return kind_; }
  int level() const noexcept { return level_; }
  // 1-based line of the offending level when loaded from text, else 0.
  int line() const noexcept { return line_; }

 private:
  GridErrorKind kind_;
  int level_;
  int line_;
};

enum class Generator { UniformDyadic, UniformMAdic, Explicit };

struct LevelResolutions {
  int level = 0;
  std::int64_t point_count = 0;  // N_n
  Rational min_gap;              // h_n
  Rational max_gap;              // H_n
};

class DiscretizationSystem {
 public:
  Generator generator() const noexcept { return generator_; }
  int depth() const noexcept { return depth_; }
  // Base of a uniform generator, 0 for explicit systems.
  int base() const noexcept { return base_; }

  bool has_level(int n) const noexcept { return n >= 1 && n <= depth_; }
  std::int64_t point_count(int n) const;

  // Materializes level n. Uniform levels are generated on demand.
  std::vector<Rational> points(int n) const;

  // True when every gap of level n equals h_n.
  bool is_uniform_level(int n) const;

 private:
  friend DiscretizationSystem build_uniform(int base, int depth);
  friend DiscretizationSystem build_explicit(std::vector<std::vector<Rational>> levels);

  void require_level(int n) const;

  Generator generator_ = Generator::Explicit;
  int depth_ = 0;
  int base_ = 0;
  std::vector<std::vector<Rational>> levels_;  // explicit systems only
};

// Level n holds {k * base^-n : 0 <= k <= base^n}. base^depth is capped at 2^40.
DiscretizationSystem build_uniform(int base, int depth);

// Validates endpoints, strict ordering, nesting and refinement (the deepest
// level's maximal gap is below the first one's). Errors name the level.
DiscretizationSystem build_explicit(std::vector<std::vector<Rational>> levels);

// One level per line, whitespace separated rationals. Blank lines and lines
// starting with '#' are skipped. Errors carry the 1-based line number.
DiscretizationSystem read_system(std::istream& in);
DiscretizationSystem load_system(const std::string& path);
void write_system(std::ostream& out, const DiscretizationSystem& system);

LevelResolutions resolutions(const DiscretizationSystem& system, int n);
LevelResolutions resolutions_of(const std::vector<Rational>& points, int n = 0);

// The unique j with j*h <= value < (j+1)*h.
Symbol image_cell(const Rational& value, const Rational& h);

}  // namespace curvecode
