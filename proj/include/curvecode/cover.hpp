#pragma once

// Subdiscretizations of a level and the epsilon-boxes built on them.
//
// Anchors: x_{i_1} = 0, x_{i_{k+1}} = max{x in X_n : x < x_{i_k} + 2 delta},
// until 1 is reached. Box k spans (x_{i_k}, x_{i_k} + 2 delta) horizontally
// and (g(D_k) - eps/2, g(D_k) + eps/2) vertically, D_k the midpoint of
// consecutive anchors.

#include "curvecode/grid.hpp"
#include "curvecode/pl_function.hpp"
#include "curvecode/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace curvecode {

class DeltaTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CoverViolation : public std::runtime_error {
 public:
  CoverViolation(const std::string& what, std::size_t box, Rational x, Rational y)
      : std::runtime_error(what), box_(box), x_(std::move(x)), y_(std::move(y)) {}
  std::size_t box() const noexcept { return box_; }
  // A point of the closed box where |g(x) - y| reaches the reported deviation.
  const Rational& x() const noexcept { return x_; }
  const Rational& y() const noexcept { return y_; }

 private:
  std::size_t box_;
  Rational x_;
  Rational y_;
};

struct Anchor {
  std::size_t index = 0;  // 0-based position in X_n
  Rational x;
};

struct Box {
  Rational x_lo;
  Rational x_hi;  // x_lo + 2 delta
  Rational y_lo;
  Rational y_hi;
  Rational center_x;  // D_k
  Rational center_y;  // g(D_k)
};

struct EpsilonCover {
  int level = 0;
  Rational delta;
  Rational epsilon;
  std::vector<Anchor> anchors;      // K entries, first x = 0, last x = 1
  std::vector<std::int64_t> gaps;   // l_k, K-1 entries
  std::vector<Box> boxes;           // K-1 entries, empty until epsilon_boxes

  std::size_t anchor_count() const noexcept { return anchors.size(); }  // K
};

// delta_g(eps) = eps / L for PL g of maximal slope L > 0, and 1 for constants.
Rational modulus(const PLFunction& g, const Rational& eps);

// Throws DeltaTooSmall unless 2 delta > H_n.
EpsilonCover subdiscretize(const DiscretizationSystem& system, int n, const Rational& delta);
EpsilonCover subdiscretize_points(const std::vector<Rational>& points, int n, const Rational& delta);

EpsilonCover epsilon_boxes(const PLFunction& g, const Rational& eps, EpsilonCover cover);

struct CoverReport {
  Rational max_deviation;  // sup of |g(x) - y| over the union of boxes
  std::size_t worst_box = 0;
  Rational witness_x;
  bool passes = false;     // max_deviation <= eps
};

// Exact check of the cover property for PL g, evaluated on box corners and
// g's breakpoints inside each box (restricted to [0,1]).
CoverReport inspect_cover(const EpsilonCover& cover, const PLFunction& g);

// Like inspect_cover but throws CoverViolation when the property fails.
CoverReport verify_cover(const EpsilonCover& cover, const PLFunction& g);

enum class CountOutcome {
  HypothesisFails,    // ceil(1/(2 delta)) H_n >= 2 delta: no claim
  Matches,            // K = ceil(1/(2 delta)) + 1
  IntegerBoundary,    // 1/(2 delta) is an integer and K differs
  Exceeds,            // 1/(2 delta) is not an integer and K differs
};

struct CountReport {
  std::int64_t cells = 0;      // ceil(1/(2 delta))
  Rational hypothesis_lhs;     // ceil(1/(2 delta)) * H_n
  Rational hypothesis_rhs;     // 2 delta
  bool hypothesis_holds = false;
  std::int64_t predicted = 0;  // cells + 1
  std::int64_t observed = 0;   // K
  CountOutcome outcome = CountOutcome::HypothesisFails;
};

CountReport count_check(const Rational& delta, const Rational& max_gap, std::int64_t observed_k);

// Text table "k x_ik l_k x_lo x_hi y_lo y_hi" (k from 1), one row per box.
void write_cover(std::ostream& out, const EpsilonCover& cover);

}  // namespace curvecode
