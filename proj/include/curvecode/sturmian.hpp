#pragma once

// Classical cutting sequences of straight lines and their comparison with the
// stretched code of the same line sampled on a uniform level.
//
// A line Y = slope * X + intercept in lattice coordinates is written as 0 at
// every crossing of a vertical line X = k and 1 at every crossing of a
// horizontal line Y = m, in order of X, for crossings strictly inside
// (0, extent). On a uniform level with step h the function
// f(x) = slope * x + intercept * h is the same line rescaled by 1/h.

#include "curvecode/codec.hpp"
#include "curvecode/grid.hpp"
#include "curvecode/words.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace curvecode {

struct LineSpec {
  Rational slope;      // >= 0
  Rational intercept;
  std::int64_t extent = 0;  // lattice cells along X; 0 = unbounded
};

class LatticeHit : public std::runtime_error {
 public:
  LatticeHit(const std::string& what, std::int64_t x, std::int64_t y)
      : std::runtime_error(what), x_(x), y_(y) {}
  std::int64_t x() const noexcept { return x_; }
  std::int64_t y() const noexcept { return y_; }

 private:
  std::int64_t x_;
  std::int64_t y_;
};

// First `length` crossings (fewer if the extent ends first).
Word cutting_sequence(const LineSpec& spec, std::int64_t length);

// Every crossing strictly inside (0, extent); extent must be positive.
Word cutting_sequence_in_extent(const LineSpec& spec);

// Stretched code of f(x) = slope * x + intercept * h_n on a uniform level.
Code line_stretched_code(const LineSpec& spec, const DiscretizationSystem& system, int n);

struct SequenceComparison {
  std::int64_t common_length = 0;
  std::int64_t mismatches = 0;         // position-wise over the common prefix
  std::int64_t length_difference = 0;  // |len(a) - len(b)|
  std::int64_t discrepancy() const noexcept { return mismatches + length_difference; }
};

SequenceComparison compare_sequences(std::span<const Symbol> a, std::span<const Symbol> b);

// Stretched code at level n against the cutting sequence over the matched
// extent 1/h_n.
SequenceComparison compare_with_cutting(const LineSpec& spec, const DiscretizationSystem& system, int n);

struct ConvergenceRow {
  int level = 0;
  std::int64_t point_count = 0;
  std::int64_t ups = 0;
  std::int64_t downs = 0;
  std::int64_t variation = 0;
  Rational up_frequency;             // fr(1, s) = u_n / |s|
  std::optional<Rational> up_ratio;  // u_n / V_n, absent when V_n = 0
  // Horizontal crossings over all crossings strictly inside (0, 1/h_n):
  // u_n / (u_n + N_n - 2). For increasing lines d_n = 0, so u_n / V_n is 1
  // and this is the share that tends to slope / (1 + slope).
  std::optional<Rational> crossing_ratio;
};

std::vector<ConvergenceRow> frequency_convergence(const LineSpec& spec, const DiscretizationSystem& system,
                                                  const std::vector<int>& levels);

// slope / (1 + slope): limit share of horizontal crossings.
Rational crossing_share_limit(const Rational& slope);

// CSV with columns n,N_n,u_n,d_n,V_n,fr_1_s,u_over_V,crossing_ratio.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

}  // namespace curvecode
