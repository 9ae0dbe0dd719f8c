#include "curvecode/words.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace curvecode {

namespace {

// KMP failure function: border[i] = length of the longest proper border of w[0..i].
std::vector<std::size_t> borders(std::span<const Symbol> w) {
  std::vector<std::size_t> border(w.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    while (k > 0 && w[i] != w[k]) k = border[k - 1];
    if (w[i] == w[k]) ++k;
    border[i] = k;
  }
  return border;
}

std::int64_t kmp_count(std::span<const Symbol> w, std::span<const Symbol> v,
                       const std::vector<std::size_t>& border) {
  std::int64_t count = 0;
  std::size_t k = 0;
  for (Symbol s : v) {
    while (k > 0 && s != w[k]) k = border[k - 1];
    if (s == w[k]) ++k;
    if (k == w.size()) {
      ++count;
      k = border[k - 1];
    }
  }
  return count;
}

void require_pattern(std::span<const Symbol> w) {
  if (w.empty()) throw WordError("pattern word must be non-empty");
}

// Candidate blockers ordered by magnitude: 0, 1, -1, 2, -2, ...
std::vector<Symbol> blocker_candidates(std::span<const Symbol> w, const SymbolRange& alphabet) {
  std::vector<Symbol> absent;
  std::vector<Symbol> present;
  constexpr Symbol kSearch = 64;
  for (Symbol m = 0; m <= kSearch; ++m) {
    for (Symbol s : {m, -m}) {
      if (m == 0 && s != 0) continue;
      if (!alphabet.contains(s)) continue;
      bool in_w = std::find(w.begin(), w.end(), s) != w.end();
      (in_w ? present : absent).push_back(s);
      if (m == 0) break;
    }
  }
  absent.insert(absent.end(), present.begin(), present.end());
  return absent;
}

enum class Layout { CoreFirst, FillerFirst, Centered };

Word build_candidate(std::span<const Symbol> w, std::int64_t p, std::int64_t copies, std::int64_t length,
                     Symbol blocker, Layout layout) {
  const std::int64_t core_len = copies == 0 ? 0 : p * (copies - 1) + static_cast<std::int64_t>(w.size());
  const std::int64_t filler = length - core_len;
  std::int64_t before = 0;
  if (layout == Layout::FillerFirst) before = filler;
  if (layout == Layout::Centered) before = filler / 2;
  Word v;
  v.reserve(static_cast<std::size_t>(length));
  for (std::int64_t i = 0; i < before; ++i) v.push_back(blocker);
  for (std::int64_t i = 0; i < core_len; ++i) v.push_back(w[static_cast<std::size_t>(i % p)]);
  while (static_cast<std::int64_t>(v.size()) < length) v.push_back(blocker);
  return v;
}

bool within(const Rational& freq, const Rational& alpha, const Rational& tol) {
  return abs_rational(freq - alpha) <= tol;
}

// Core occurrence counts c with |c/L - alpha| <= tol, closest first (at most a handful).
std::vector<std::int64_t> admissible_counts(std::int64_t length, std::int64_t max_copies, const Rational& alpha,
                                            const Rational& tol) {
  constexpr std::size_t kMaxCandidates = 8;
  const Rational scaled = alpha * Rational(static_cast<long>(length));
  const std::int64_t center = std::clamp<std::int64_t>(floor_to_symbol(scaled + Rational(1, 2)), 0, max_copies);
  std::vector<std::int64_t> counts;
  for (std::int64_t offset = 0; counts.size() < kMaxCandidates; ++offset) {
    bool any_within = false;
    for (std::int64_t c : {center - offset, center + offset}) {
      if (c < 0 || c > max_copies) continue;
      if (within(make_rational(c, length), alpha, tol)) {
        counts.push_back(c);
        any_within = true;
      }
      if (offset == 0) break;
    }
    // Distance to alpha grows with the offset on both sides.
    if (!any_within) break;
  }
  std::stable_sort(counts.begin(), counts.end(), [&](std::int64_t a, std::int64_t b) {
    return abs_rational(make_rational(a, length) - alpha) < abs_rational(make_rational(b, length) - alpha);
  });
  return counts;
}

std::optional<Word> try_synthesize(std::span<const Symbol> w, std::int64_t length, const FrequencyTarget& target,
                                   const SymbolRange& alphabet) {
  const std::int64_t p = min_periodic_factor_length(w);
  const auto wl = static_cast<std::int64_t>(w.size());
  const std::int64_t max_copies = length >= wl ? (length - wl) / p + 1 : 0;
  const Rational tol = make_rational(1, 3 * target.t);
  const auto counts = admissible_counts(length, max_copies, target.alpha, tol);
  if (counts.empty()) return std::nullopt;
  const auto border = borders(w);
  for (Symbol blocker : blocker_candidates(w, alphabet)) {
    for (Layout layout : {Layout::CoreFirst, Layout::FillerFirst, Layout::Centered}) {
      for (std::int64_t c : counts) {
        Word v = build_candidate(w, p, c, length, blocker, layout);
        if (within(make_rational(kmp_count(w, v, border), length), target.alpha, tol)) return v;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::int64_t occurrences(std::span<const Symbol> w, std::span<const Symbol> v) {
  require_pattern(w);
  if (w.size() > v.size()) return 0;
  return kmp_count(w, v, borders(w));
}

std::int64_t occurrences_starting_in(std::span<const Symbol> w, std::span<const Symbol> v, std::size_t begin,
                                     std::size_t end) {
  require_pattern(w);
  end = std::min(end, v.size());
  if (begin >= end) return 0;
  const std::size_t stop = std::min(v.size(), end + w.size() - 1);
  return occurrences(w, v.subspan(begin, stop - begin));
}

Rational frequency(std::span<const Symbol> w, std::span<const Symbol> v) {
  if (v.empty()) throw WordError("frequency in an empty word is undefined");
  return make_rational(occurrences(w, v), static_cast<std::int64_t>(v.size()));
}

std::int64_t min_periodic_factor_length(std::span<const Symbol> w) {
  require_pattern(w);
  const auto border = borders(w);
  return static_cast<std::int64_t>(w.size() - border.back());
}

Symbol height(std::span<const Symbol> w) {
  Symbol h = 0;
  for (Symbol s : w) h = std::max(h, s < 0 ? -s : s);
  return h;
}

Word synthesize_word(std::span<const Symbol> w, std::int64_t length, const FrequencyTarget& target,
                     const SymbolRange& alphabet) {
  require_pattern(w);
  if (target.t < 1) throw WordError("precision t must be a positive integer");
  if (length < 0) throw WordError("word length must be non-negative");
  const std::int64_t p = min_periodic_factor_length(w);
  if (target.alpha < 0 || target.alpha > make_rational(1, p)) {
    throw WordError("target frequency " + to_string(target.alpha) + " outside [0, 1/p(w)] = [0, 1/" +
                    std::to_string(p) + "]");
  }
  for (Symbol s : w) {
    if (!alphabet.contains(s)) throw WordError("pattern symbol " + std::to_string(s) + " outside the alphabet");
  }
  if (length == 0) return {};
  if (auto v = try_synthesize(w, length, target, alphabet)) return *v;

  std::int64_t hint = -1;
  const std::int64_t horizon = length + 3 * target.t * (p + static_cast<std::int64_t>(w.size())) + 64;
  for (std::int64_t l = length + 1; l <= horizon; ++l) {
    if (try_synthesize(w, l, target, alphabet)) {
      hint = l;
      break;
    }
  }
  throw SynthesisInfeasible("no word of length " + std::to_string(length) + " reaches frequency " +
                                to_string(target.alpha) + " within 1/" + std::to_string(3 * target.t) +
                                (hint > 0 ? "; smallest feasible longer length is " + std::to_string(hint) : ""),
                            hint);
}

Word synthesize_nearest(std::span<const Symbol> w, std::int64_t length, const Rational& alpha,
                        const SymbolRange& alphabet) {
  require_pattern(w);
  if (length < 0) throw WordError("word length must be non-negative");
  if (length == 0) return {};
  const std::int64_t p = min_periodic_factor_length(w);
  const auto wl = static_cast<std::int64_t>(w.size());
  const std::int64_t max_copies = length >= wl ? (length - wl) / p + 1 : 0;
  std::vector<std::int64_t> counts;
  for (std::int64_t c = 0; c <= max_copies; ++c) counts.push_back(c);
  std::stable_sort(counts.begin(), counts.end(), [&](std::int64_t a, std::int64_t b) {
    return abs_rational(make_rational(a, length) - alpha) < abs_rational(make_rational(b, length) - alpha);
  });
  if (counts.size() > 8) counts.resize(8);
  const auto border = borders(w);
  std::optional<Word> best;
  Rational best_dev;
  for (Symbol blocker : blocker_candidates(w, alphabet)) {
    for (Layout layout : {Layout::CoreFirst, Layout::FillerFirst, Layout::Centered}) {
      for (std::int64_t c : counts) {
        Word v = build_candidate(w, p, c, length, blocker, layout);
        const Rational dev = abs_rational(make_rational(kmp_count(w, v, border), length) - alpha);
        if (!best || dev < best_dev) {
          best = std::move(v);
          best_dev = dev;
        }
      }
    }
    if (best && best_dev == abs_rational(make_rational(counts.front(), length) - alpha)) break;
  }
  return *best;
}

Word assemble(const std::vector<Word>& segments, std::span<const Symbol> bridges) {
  if (bridges.size() != segments.size()) throw WordError("assemble: need exactly one bridge per segment");
  Word v;
  std::size_t total = bridges.size();
  for (const auto& s : segments) total += s.size();
  v.reserve(total);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    v.insert(v.end(), segments[k].begin(), segments[k].end());
    v.push_back(bridges[k]);
  }
  return v;
}

AssemblyReport assembly_bound_check(std::span<const Symbol> w, const std::vector<Word>& segments,
                                    std::span<const Symbol> bridges, const Rational& alpha, std::int64_t t) {
  require_pattern(w);
  if (t < 1) throw WordError("precision t must be a positive integer");
  if (segments.empty()) throw WordError("assembly needs at least one segment");
  const Rational segment_tol = make_rational(1, 3 * t);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (segments[k].empty()) continue;
    Rational fk = frequency(w, segments[k]);
    if (abs_rational(fk - alpha) >= segment_tol) {
      throw WordError("segment " + std::to_string(k + 1) + " has frequency " + to_string(fk) +
                      ", not within 1/(3t) of alpha");
    }
  }

  const Word v = assemble(segments, bridges);
  AssemblyReport r;
  r.segment_count = static_cast<std::int64_t>(segments.size());
  r.pattern_length = static_cast<std::int64_t>(w.size());
  r.assembled_length = static_cast<std::int64_t>(v.size());
  r.hypothesis_lhs = make_rational(r.segment_count * r.pattern_length, r.assembled_length);
  r.hypothesis_rhs = segment_tol;
  r.hypothesis_holds = r.hypothesis_lhs < r.hypothesis_rhs;
  if (!r.hypothesis_holds) {
    throw HypothesisFails("(K-1)|w|/|v| = " + to_string(r.hypothesis_lhs) + " is not below 1/(3t) = " +
                              to_string(r.hypothesis_rhs),
                          r.hypothesis_lhs, r.hypothesis_rhs);
  }

  for (const auto& s : segments) r.segment_occurrences += occurrences(w, s);
  r.total_occurrences = occurrences(w, v);
  const Rational vlen(static_cast<long>(r.assembled_length));
  r.bracket_lower = Rational(static_cast<long>(r.segment_occurrences)) / vlen;
  r.bracket_upper = r.bracket_lower + r.hypothesis_lhs;
  r.realized_frequency = make_rational(r.total_occurrences, r.assembled_length);
  r.bracket_holds = r.bracket_lower <= r.realized_frequency && r.realized_frequency <= r.bracket_upper;

  const std::int64_t inner = r.assembled_length - r.segment_count;  // S = sum |v_k|
  if (inner > 0) {
    const Rational sum(static_cast<long>(r.segment_occurrences));
    const Rational s(static_cast<long>(inner));
    const Rational denom = s * s + Rational(static_cast<long>(r.segment_count)) * s;
    r.segment_ratio = sum / s;
    r.correction_as_printed = sum / denom;
    r.correction_exact = Rational(static_cast<long>(r.segment_count)) * sum / denom;
    r.printed_identity_holds = r.bracket_lower == r.segment_ratio - r.correction_as_printed;
    r.corrected_identity_holds = r.bracket_lower == r.segment_ratio - r.correction_exact;
  }

  r.deviation = abs_rational(r.realized_frequency - alpha);
  r.bound = make_rational(1, t);
  r.conclusion_holds = r.deviation <= r.bound;
  return r;
}

Word parse_word(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',' || c == '[' || c == ']') c = ' ';
  }
  std::istringstream in(cleaned);
  Word w;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw WordError("not an integer symbol: '" + token + "'");
    }
    if (used != token.size()) throw WordError("not an integer symbol: '" + token + "'");
    w.push_back(static_cast<Symbol>(value));
  }
  return w;
}

void write_words(std::ostream& out, const std::vector<Word>& words) {
  for (const auto& w : words) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out << ' ';
      out << w[i];
    }
    out << '\n';
  }
}

std::vector<Word> read_words(std::istream& in) {
  std::vector<Word> words;
  std::string line;
  while (std::getline(in, line)) words.push_back(parse_word(line));
  return words;
}

}  // namespace curvecode
