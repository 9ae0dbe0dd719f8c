#pragma once

// Independent reference implementations and random generators shared by the
// unit, property and acceptance tests. Nothing here calls the library code it
// is meant to check.

#include "curvecode/grid.hpp"
#include "curvecode/pl_function.hpp"
#include "curvecode/words.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using curvecode::Breakpoint;
using curvecode::PLFunction;
using curvecode::Rational;
using curvecode::Symbol;
using curvecode::Word;

// Unique j with j*h <= v < (j+1)*h, found by scanning around a double estimate.
inline Symbol cell(const Rational& v, const Rational& h) {
  const double guess = std::floor(v.get_d() / h.get_d());
  for (auto j = static_cast<Symbol>(guess) - 3;; ++j) {
    const Rational lo = Rational(static_cast<long>(j)) * h;
    if (lo <= v && v < lo + h) return j;
    if (lo > v) throw std::logic_error("cell oracle overshoot");
  }
}

// Linear scan over segments.
inline Rational eval(const PLFunction& f, const Rational& x) {
  const auto& b = f.breakpoints();
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    if (b[i].x <= x && x <= b[i + 1].x) {
      return b[i].y + (b[i + 1].y - b[i].y) * (x - b[i].x) / (b[i + 1].x - b[i].x);
    }
  }
  throw std::logic_error("eval oracle outside [0,1]");
}

inline std::vector<Symbol> quantitative(const PLFunction& f, const std::vector<Rational>& xs, const Rational& h) {
  std::vector<Symbol> q;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) q.push_back(cell(eval(f, xs[i + 1]), h) - cell(eval(f, xs[i]), h));
  return q;
}

inline std::vector<Symbol> stretched(const std::vector<Symbol>& q) {
  std::vector<Symbol> s;
  for (Symbol v : q) {
    for (Symbol k = 0; k < (v < 0 ? -v : v); ++k) s.push_back(v > 0 ? 1 : -1);
    s.push_back(0);
  }
  return s;
}

inline std::int64_t occurrences(const Word& w, const Word& v) {
  std::int64_t count = 0;
  for (std::size_t j = 0; j + w.size() <= v.size(); ++j) {
    bool match = true;
    for (std::size_t i = 0; i < w.size() && match; ++i) match = v[j + i] == w[i];
    count += match;
  }
  return count;
}

// p(w) = min{|u| : oc(w, w u) = 2}, trying u = the tail of w of every length
// and, for lengths beyond |w|, every u is irrelevant because u = w gives 2.
inline std::int64_t min_period(const Word& w) {
  for (std::size_t len = 1; len <= w.size(); ++len) {
    // Any second occurrence inside w u starting at offset len forces u to be
    // w's last len symbols; testing that u decides existence for this length.
    Word wu = w;
    wu.insert(wu.end(), w.end() - static_cast<std::ptrdiff_t>(len), w.end());
    if (occurrences(w, wu) == 2) return static_cast<std::int64_t>(len);
  }
  return static_cast<std::int64_t>(w.size());
}

// Anchors of the 2*delta subdiscretization by a literal reading of
// x_{k+1} = max{x in X : x < x_k + 2 delta}, last anchor 1.
inline std::vector<std::size_t> anchors(const std::vector<Rational>& xs, const Rational& delta) {
  std::vector<std::size_t> out{0};
  while (out.back() + 1 < xs.size()) {
    std::size_t best = out.back();
    for (std::size_t i = out.back() + 1; i < xs.size(); ++i) {
      if (xs[i] < xs[out.back()] + 2 * delta) best = i;
    }
    if (best == out.back()) throw std::logic_error("anchor oracle stalled");
    out.push_back(best);
  }
  return out;
}

// Every crossing of Y = slope X + c with integer lines inside (0, extent),
// listed with its abscissa and sorted; 0 = vertical, 1 = horizontal.
inline Word cutting_sequence(const Rational& slope, const Rational& c, std::int64_t extent) {
  std::vector<std::pair<Rational, Symbol>> events;
  for (std::int64_t k = 1; k < extent; ++k) events.emplace_back(Rational(static_cast<long>(k)), 0);
  if (slope > 0) {
    const Rational top = slope * Rational(static_cast<long>(extent)) + c;
    for (Symbol m = static_cast<Symbol>(std::floor(c.get_d())) - 1; Rational(static_cast<long>(m)) < top; ++m) {
      const Rational x = (Rational(static_cast<long>(m)) - c) / slope;
      if (x > 0 && x < Rational(static_cast<long>(extent))) events.emplace_back(x, 1);
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Word out;
  for (const auto& e : events) out.push_back(e.second);
  return out;
}

}  // namespace oracle

namespace gen {

using curvecode::Breakpoint;
using curvecode::PLFunction;
using curvecode::Rational;
using curvecode::Symbol;
using curvecode::Word;

using Rng = std::mt19937_64;

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Random rational in [lo, hi] with denominator dividing max_den.
inline Rational rational(Rng& rng, const Rational& lo, const Rational& hi, std::int64_t max_den = 1000) {
  const std::int64_t k = uniform_int(rng, 0, max_den);
  Rational r = lo + (hi - lo) * Rational(static_cast<long>(k), static_cast<unsigned long>(max_den));
  r.canonicalize();
  return r;
}

// Random PL function with `pieces` pieces and values in [-amp, amp].
inline PLFunction pl_function(Rng& rng, int pieces, const Rational& amp = 1) {
  std::set<Rational> xs{Rational(0), Rational(1)};
  while (static_cast<int>(xs.size()) < pieces + 1) xs.insert(rational(rng, 0, 1, 997));
  std::vector<Breakpoint> bps;
  for (const auto& x : xs) bps.push_back({x, rational(rng, -amp, amp, 1009)});
  return PLFunction(std::move(bps));
}

inline Word word(Rng& rng, std::size_t length, Symbol lo, Symbol hi) {
  Word w(length);
  for (auto& s : w) s = uniform_int(rng, lo, hi);
  return w;
}

// Nested explicit system: each level adds a few random points.
inline curvecode::DiscretizationSystem explicit_system(Rng& rng, int depth, int per_level) {
  std::set<Rational> current{Rational(0), Rational(1)};
  std::vector<std::vector<Rational>> levels;
  for (int n = 0; n < depth; ++n) {
    // Refine the widest gaps so H_n strictly decreases.
    std::vector<Rational> pts(current.begin(), current.end());
    Rational widest = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) widest = std::max(widest, Rational(pts[i + 1] - pts[i]));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (pts[i + 1] - pts[i] == widest) current.insert(rational(rng, pts[i] + (widest / 4), pts[i + 1] - (widest / 4), 7));
    }
    for (int k = 0; k < per_level; ++k) current.insert(rational(rng, 0, 1, 4093));
    levels.emplace_back(current.begin(), current.end());
  }
  return curvecode::build_explicit(std::move(levels));
}

}  // namespace gen
