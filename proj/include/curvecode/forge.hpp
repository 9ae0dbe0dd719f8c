#pragma once

// Witness construction. Given a target g and a tolerance eps, build a PL
// function f with ||f - g|| <= eps whose level-n code
//  - realizes a prescribed frequency of a word w (frequency forge), or
//  - alternates large jumps of both signs (zigzag forge).
//
// Every returned result carries a certificate recomputed from the finished f.

#include "curvecode/codec.hpp"
#include "curvecode/cover.hpp"
#include "curvecode/grid.hpp"
#include "curvecode/pl_function.hpp"
#include "curvecode/words.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvecode {

enum class ForgeMode { Qualitative, Quantitative };

enum class ForgeErrorKind {
  InvalidRequest,
  SystemTooShallow,
  SynthesisInfeasible,
  DoesNotFit,
  JumpTooLarge,
  LevelTooCoarse,
};

class ForgeError : public std::runtime_error {
 public:
  ForgeError(ForgeErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ForgeErrorKind kind() const noexcept { return kind_; }

 private:
  ForgeErrorKind kind_;
};

struct ForgeRequest {
  PLFunction g = PLFunction::constant(0);
  Rational eps;
  Word w;
  FrequencyTarget target;
  ForgeMode mode = ForgeMode::Qualitative;
  DiscretizationSystem system;
  int min_level = 1;
};

// Inscription triangle of one segment. The apex sits on the image-cell
// center nearest to g(D_k) at the first point after the bridge; the base is
// the vertical segment at the next anchor, half-height |v_k| * H * h_n.
struct Triangle {
  Rational apex_x;
  Rational apex_y;
  Rational base_x;
  Rational half_height;
  Rational step_height;  // H * h_n: allowed growth per grid step
};

struct Certificate {
  Rational sup_distance;
  bool sup_ok = false;
  Rational frequency_deviation;
  bool frequency_ok = false;
  bool segments_match = false;
  bool triangles_contained = false;
  Rational margin;  // min distance of samples to image grid lines
  bool margin_ok = false;

  bool all() const noexcept {
    return sup_ok && frequency_ok && segments_match && triangles_contained && margin_ok;
  }
};

struct ForgeResult {
  PLFunction f = PLFunction::constant(0);
  int level = 0;
  Code code;  // qualitative or quantitative, per the request mode
  Rational realized_frequency;
  Certificate certificate;
  EpsilonCover cover;
  std::vector<Word> segments;
  std::vector<Triangle> triangles;
  Rational delta;
};

// delta used by the frequency forge: min(delta_g(eps/2), eps/(4H)) with H = 1
// in qualitative mode and max(H(w), 1) in quantitative mode.
Rational forge_delta(const PLFunction& g, const Rational& eps, ForgeMode mode, std::span<const Symbol> w);

ForgeResult forge_frequency_witness(const ForgeRequest& request);

// Sample values at xs (the grid points after the bridge up to the next
// anchor) walking the image cells by the symbols of v from start_cell.
// Throws ForgeError(DoesNotFit) when the walk leaves the triangle or the
// triangle leaves the box.
std::vector<Rational> inscribe_segment(const Box& box, const Triangle& triangle, std::span<const Symbol> v,
                                       std::span<const Rational> xs, const Rational& h, Symbol start_cell);

// Recomputes every certificate entry from f alone.
Certificate reverify(const ForgeRequest& request, const ForgeResult& result);

struct ZigzagCertificate {
  std::int64_t above = 0;  // #{i : Q_i > jump}
  std::int64_t below = 0;  // #{i : Q_i < -jump}
  bool counts_ok = false;  // both exceed N_n / 3
  std::int64_t exceptions = 0;  // steps off the +-(jump+1) alternation
  bool exceptions_ok = false;   // exceptions <= K
  bool zero_free = false;       // no 0 in the qualitative code
  bool ups_ok = false;          // u_n > jump * N_n / 3 and d_n > jump * N_n / 3
  Rational sup_distance;
  bool sup_ok = false;
  Rational margin;
  bool margin_ok = false;

  bool all() const noexcept {
    return counts_ok && exceptions_ok && zero_free && ups_ok && sup_ok && margin_ok;
  }
};

struct ZigzagResult {
  PLFunction f = PLFunction::constant(0);
  int level = 0;
  std::int64_t jump = 0;
  Code quantitative;
  Code qualitative;
  StretchStats stats;
  EpsilonCover cover;
  ZigzagCertificate certificate;
};

ZigzagResult forge_zigzag(const PLFunction& g, const Rational& eps, std::int64_t jump,
                          const DiscretizationSystem& system, int n);

// Largest jump admitted at level n: the largest j >= 0 with 2 (j+1) h_n < eps.
std::optional<std::int64_t> max_zigzag_jump(const Rational& eps, const Rational& h);

// Structured text record "key value" per line.
void write_certificate(std::ostream& out, const ForgeResult& result);
void write_zigzag_certificate(std::ostream& out, const ZigzagResult& result);

}  // namespace curvecode
