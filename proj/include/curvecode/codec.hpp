#pragma once

// Quantitative, qualitative and stretched codes of a function sampled on a
// discretization level, and the up/down statistics of the stretched code.

#include "curvecode/grid.hpp"
#include "curvecode/pl_function.hpp"
#include "curvecode/rational.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace curvecode {

enum class CodeKind { Quantitative, Qualitative, Stretched };

std::string_view kind_name(CodeKind kind);

struct Code {
  CodeKind kind = CodeKind::Quantitative;
  int level = 0;
  std::vector<Symbol> symbols;

  friend bool operator==(const Code&, const Code&) = default;
};

class CodecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Q_i = cell(f(x_{i+1})) - cell(f(x_i)) for consecutive points of level n.
Code quantitative_code(const PLFunction& f, const DiscretizationSystem& system, int n);

// Same, from already sampled values f(x_0..x_{N-1}).
Code quantitative_code_from_samples(std::span<const Rational> values, const Rational& h, int level);

Code qualitative_code(const Code& quantitative);

// Each entry Q_i becomes |Q_i| copies of sign(Q_i) followed by one 0.
Code stretched_code(const Code& quantitative);

// Inverse of stretched_code: split at the zeros and count the run lengths.
std::vector<Symbol> unstretch(std::span<const Symbol> stretched);

struct StretchStats {
  std::int64_t ups = 0;          // u_n, number of +1 in s
  std::int64_t downs = 0;        // d_n, number of -1 in s
  std::int64_t variation = 0;    // V_n = u_n + d_n
  std::int64_t zeros = 0;        // N_n - 1
  std::int64_t point_count = 0;  // N_n
  Symbol floor_drift = 0;        // floor((f(1) - f(0)) / h_n)
  Symbol net = 0;                // sum of Q_i = u_n - d_n

  std::int64_t stretched_length() const noexcept { return variation + zeros; }

  std::optional<Rational> up_ratio;             // u_n / V_n when V_n > 0
  std::optional<Rational> identity_with_net;    // 1 / (2 - net / u_n) when u_n > 0
  std::optional<Rational> identity_with_floor;  // 1 / (2 - floor_drift / u_n) when defined
  std::optional<Rational> up_frequency;         // fr(1, s) = u_n / |s| when |s| > 0
};

StretchStats stretch_stats(const Code& quantitative, const PLFunction& f, const Rational& h);

// Smallest distance from any sample value to a line of the image grid j*h.
Rational grid_margin(std::span<const Rational> values, const Rational& h);

// Text format: a header line "kind level length" then the symbols.
void write_code(std::ostream& out, const Code& code);
Code read_code(std::istream& in);

}  // namespace curvecode
