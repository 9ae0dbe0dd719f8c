#pragma once

// Finite words over integer alphabets: occurrence counts, frequencies,
// minimal periods, target-frequency synthesis and segment/bridge assembly.

#include "curvecode/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvecode {

using Word = std::vector<Symbol>;

// Contiguous alphabet [lo, hi] of admissible symbols.
struct SymbolRange {
  Symbol lo = -1;
  Symbol hi = 1;

  bool contains(Symbol s) const noexcept { return lo <= s && s <= hi; }

  static SymbolRange ternary() { return {-1, 1}; }
  static SymbolRange integers() {
    return {std::numeric_limits<Symbol>::min() / 2, std::numeric_limits<Symbol>::max() / 2};
  }
  static SymbolRange symmetric(Symbol height) { return {-height, height}; }
};

struct FrequencyTarget {
  Rational alpha;
  std::int64_t t = 1;  // precision 1/t
};

class WordError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SynthesisInfeasible : public WordError {
 public:
  SynthesisInfeasible(const std::string& what, std::int64_t hint)
      : WordError(what), min_feasible_length_(hint) {}
  // Smallest length above the requested one at which synthesis succeeds,
  // or -1 when none was found.
  std::int64_t min_feasible_length() const noexcept { return min_feasible_length_; }

 private:
  std::int64_t min_feasible_length_;
};

class HypothesisFails : public WordError {
 public:
  HypothesisFails(const std::string& what, Rational lhs, Rational rhs)
      : WordError(what), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}
  const Rational& lhs() const noexcept { return lhs_; }
  const Rational& rhs() const noexcept { return rhs_; }

 private:
  Rational lhs_;
  Rational rhs_;
};

// Overlapping occurrences of w in v. Returns 0 when |w| > |v|; w must be non-empty.
std::int64_t occurrences(std::span<const Symbol> w, std::span<const Symbol> v);

// Occurrences starting at positions [begin, end). Counts over disjoint
// ranges add up to occurrences(w, v); each range reads |w|-1 symbols past end.
std::int64_t occurrences_starting_in(std::span<const Symbol> w, std::span<const Symbol> v,
                                     std::size_t begin, std::size_t end);

// oc(w, v) / |v|; v must be non-empty.
Rational frequency(std::span<const Symbol> w, std::span<const Symbol> v);

// p(w) = |w| - (longest proper border of w), the minimal period.
std::int64_t min_periodic_factor_length(std::span<const Symbol> w);

// H(w) = max |w_i|.
Symbol height(std::span<const Symbol> w);

// A word of the given length over `alphabet` whose frequency of w lies
// within 1/(3t) of alpha. The result is recounted before it is returned.
Word synthesize_word(std::span<const Symbol> w, std::int64_t length, const FrequencyTarget& target,
                     const SymbolRange& alphabet);

// Best effort for lengths too short to meet a tolerance: the constructible
// word whose recounted frequency is closest to alpha.
Word synthesize_nearest(std::span<const Symbol> w, std::int64_t length, const Rational& alpha,
                        const SymbolRange& alphabet);

// v_1 b_1 v_2 b_2 ... v_m b_m.
Word assemble(const std::vector<Word>& segments, std::span<const Symbol> bridges);

struct AssemblyReport {
  std::int64_t segment_count = 0;  // K - 1
  std::int64_t pattern_length = 0;
  std::int64_t assembled_length = 0;

  Rational hypothesis_lhs;  // (K-1)|w| / |v|
  Rational hypothesis_rhs;  // 1 / (3t)
  bool hypothesis_holds = false;

  std::int64_t segment_occurrences = 0;  // sum of oc(w, v_k)
  std::int64_t total_occurrences = 0;    // oc(w, v)

  // Bracket sum/|v| <= fr(w, v) <= sum/|v| + (K-1)|w|/|v|.
  Rational bracket_lower;
  Rational bracket_upper;
  Rational realized_frequency;
  bool bracket_holds = false;

  // sum/|v| rewritten through S = sum(|v_k|):
  //   printed form:   sum/S - sum/(S^2 + (K-1)S)
  //   corrected form: sum/S - (K-1)sum/(S^2 + (K-1)S)
  Rational segment_ratio;
  Rational correction_as_printed;
  Rational correction_exact;
  bool printed_identity_holds = false;
  bool corrected_identity_holds = false;

  Rational deviation;  // |fr(w, v) - alpha|
  Rational bound;      // 1 / t
  bool conclusion_holds = false;
};

// Evaluates the assembly bound on concrete segments and bridges. Throws
// HypothesisFails when (K-1)|w|/|v| >= 1/(3t) and WordError when a segment
// misses alpha by 1/(3t) or more.
AssemblyReport assembly_bound_check(std::span<const Symbol> w, const std::vector<Word>& segments,
                                    std::span<const Symbol> bridges, const Rational& alpha, std::int64_t t);

// One word per line, space separated.
void write_words(std::ostream& out, const std::vector<Word>& words);
std::vector<Word> read_words(std::istream& in);
Word parse_word(const std::string& text);

}  // namespace curvecode
