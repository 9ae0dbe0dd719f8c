#include "curvecode/forge.hpp"

#include <algorithm>
#include <ostream>

namespace curvecode {

namespace {

Rational cell_center(Symbol cell, const Rational& h) { return (Rational(static_cast<long>(cell)) + Rational(1, 2)) * h; }

Symbol scale_height(ForgeMode mode, std::span<const Symbol> w) {
  return mode == ForgeMode::Quantitative ? std::max<Symbol>(height(w), 1) : 1;
}

void validate(const ForgeRequest& req) {
  auto fail = [](const std::string& what) { throw ForgeError(ForgeErrorKind::InvalidRequest, what); };
  if (req.eps <= 0) fail("eps must be positive");
  if (req.w.empty()) fail("pattern word must be non-empty");
  if (req.target.t < 1) fail("precision t must be a positive integer");
  const std::int64_t p = min_periodic_factor_length(req.w);
  if (req.target.alpha < 0 || req.target.alpha > make_rational(1, p)) {
    fail("alpha = " + to_string(req.target.alpha) + " outside [0, 1/p(w)] with p(w) = " + std::to_string(p));
  }
  if (req.system.depth() < 1) fail("empty discretization system");
  if (req.min_level < 1 || req.min_level > req.system.depth()) {
    fail("min level " + std::to_string(req.min_level) + " outside the provided levels 1.." +
         std::to_string(req.system.depth()));
  }
  if (req.mode == ForgeMode::Qualitative) {
    for (Symbol s : req.w) {
      if (s < -1 || s > 1) fail("qualitative words use the symbols -1, 0, 1");
    }
  } else if (req.system.depth() > 1) {
    const int d = req.system.depth();
    const Rational first = resolutions(req.system, 1).min_gap;
    const Rational last = Rational(d) * resolutions(req.system, d).min_gap;
    if (!(last < first)) fail("quantitative forging needs n*h_n to decrease over the provided levels");
  }
}

Certificate certify(const ForgeRequest& req, const PLFunction& f, const std::vector<Rational>& samples,
                    const Rational& h, const Code& code, const EpsilonCover& cover,
                    const std::vector<Word>& segments, bool triangles_ok) {
  Certificate c;
  c.sup_distance = sup_distance(f, req.g);
  c.sup_ok = c.sup_distance <= req.eps;
  const Rational fr = frequency(req.w, code.symbols);
  c.frequency_deviation = abs_rational(fr - req.target.alpha);
  c.frequency_ok = c.frequency_deviation <= make_rational(1, req.target.t);
  c.segments_match = segments.size() + 1 == cover.anchors.size();
  for (std::size_t k = 0; c.segments_match && k < segments.size(); ++k) {
    const std::size_t first = cover.anchors[k].index + 1;
    const std::size_t last = cover.anchors[k + 1].index;  // exclusive end of the segment's symbols
    c.segments_match = last >= first && last - first == segments[k].size() &&
                       std::equal(segments[k].begin(), segments[k].end(), code.symbols.begin() + first);
  }
  c.triangles_contained = triangles_ok;
  c.margin = grid_margin(samples, h);
  c.margin_ok = c.margin >= h / 4;
  return c;
}

std::string describe_failure(const Certificate& c) {
  std::string s;
  if (!c.sup_ok) s += " sup distance " + to_string(c.sup_distance) + " exceeds eps;";
  if (!c.frequency_ok) s += " frequency deviation " + to_string(c.frequency_deviation) + " exceeds 1/t;";
  if (!c.segments_match) s += " segment words not realized;";
  if (!c.triangles_contained) s += " triangle containment failed;";
  if (!c.margin_ok) s += " sample margin below h/4;";
  return s;
}

struct Attempt {
  std::optional<ForgeResult> result;
  std::string failure;
  bool synthesis_failed = false;
};

Attempt build_at_level(const ForgeRequest& req, const Rational& delta, int n, const std::vector<Rational>& points,
                       const Rational& h, EpsilonCover cover) {
  Attempt attempt;
  const Symbol scale = scale_height(req.mode, req.w);
  const SymbolRange alphabet =
      req.mode == ForgeMode::Qualitative ? SymbolRange::ternary() : SymbolRange::symmetric(scale);
  cover = epsilon_boxes(req.g, req.eps, std::move(cover));

  std::vector<Rational> values(points.size());
  values[0] = cell_center(image_cell(req.g(0), h), h);
  std::vector<Word> segments;
  std::vector<Triangle> triangles;
  segments.reserve(cover.boxes.size());
  try {
    for (std::size_t k = 0; k < cover.boxes.size(); ++k) {
      const std::size_t a = cover.anchors[k].index;
      const std::size_t b = cover.anchors[k + 1].index;
      const auto seg_len = static_cast<std::int64_t>(b - a) - 1;
      Word v;
      try {
        v = synthesize_word(req.w, seg_len, req.target, alphabet);
      } catch (const SynthesisInfeasible&) {
        // The remainder before x = 1 may be too short for the tolerance; its
        // weight is small and the recounted total is certified below.
        if (k + 2 != cover.anchors.size()) throw;
        v = synthesize_nearest(req.w, seg_len, req.target.alpha, alphabet);
      }
      const Symbol start = image_cell(cover.boxes[k].center_y, h);
      Triangle tri;
      tri.apex_x = points[a + 1];
      tri.apex_y = cell_center(start, h);
      tri.base_x = points[b];
      tri.step_height = Rational(static_cast<long>(scale)) * h;
      tri.half_height = Rational(static_cast<long>(v.size())) * tri.step_height;
      const std::span<const Rational> xs(points.data() + a + 1, b - a);
      auto walk = inscribe_segment(cover.boxes[k], tri, v, xs, h, start);
      std::move(walk.begin(), walk.end(), values.begin() + static_cast<std::ptrdiff_t>(a + 1));
      segments.push_back(std::move(v));
      triangles.push_back(std::move(tri));
    }
  } catch (const SynthesisInfeasible& e) {
    attempt.failure = "level " + std::to_string(n) + ": " + e.what();
    attempt.synthesis_failed = true;
    return attempt;
  } catch (const ForgeError& e) {
    if (e.kind() != ForgeErrorKind::DoesNotFit) throw;
    attempt.failure = "level " + std::to_string(n) + ": " + e.what();
    return attempt;
  }

  std::vector<Breakpoint> bps;
  bps.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) bps.push_back({points[i], values[i]});
  PLFunction f(std::move(bps));

  Code q = quantitative_code_from_samples(values, h, n);
  Code code = req.mode == ForgeMode::Qualitative ? qualitative_code(q) : std::move(q);
  Certificate cert = certify(req, f, values, h, code, cover, segments, true);
  if (!cert.all()) {
    attempt.failure = "level " + std::to_string(n) + ": certificate failed:" + describe_failure(cert);
    return attempt;
  }
  Rational realized = frequency(req.w, code.symbols);
  attempt.result = ForgeResult{std::move(f),        n,
                               std::move(code),     std::move(realized),
                               std::move(cert),     std::move(cover),
                               std::move(segments), std::move(triangles),
                               delta};
  return attempt;
}

}  // namespace

Rational forge_delta(const PLFunction& g, const Rational& eps, ForgeMode mode, std::span<const Symbol> w) {
  const Rational by_modulus = modulus(g, eps / 2);
  const Rational by_height = eps / (4 * Rational(static_cast<long>(scale_height(mode, w))));
  return by_modulus < by_height ? by_modulus : by_height;
}

std::vector<Rational> inscribe_segment(const Box& box, const Triangle& triangle, std::span<const Symbol> v,
                                       std::span<const Rational> xs, const Rational& h, Symbol start_cell) {
  auto does_not_fit = [](const std::string& what) { throw ForgeError(ForgeErrorKind::DoesNotFit, what); };
  if (xs.size() != v.size() + 1) does_not_fit("inscribe: need |v| + 1 abscissae");
  if (!(triangle.apex_x > box.x_lo) || !(triangle.base_x < box.x_hi)) {
    does_not_fit("triangle leaves its box horizontally");
  }
  if (!(triangle.apex_y - triangle.half_height > box.y_lo) || !(triangle.apex_y + triangle.half_height < box.y_hi)) {
    does_not_fit("triangle of half-height " + to_string(triangle.half_height) + " leaves its box vertically");
  }
  std::vector<Rational> values;
  values.reserve(xs.size());
  Symbol cell = start_cell;
  values.push_back(cell_center(cell, h));
  for (std::size_t m = 0; m < v.size(); ++m) {
    if (Rational(static_cast<long>(v[m] < 0 ? -v[m] : v[m])) * h > triangle.step_height) {
      does_not_fit("symbol " + std::to_string(v[m]) + " steeper than the triangle allows");
    }
    cell += v[m];
    Rational y = cell_center(cell, h);
    if (abs_rational(y - triangle.apex_y) > Rational(static_cast<long>(m + 1)) * triangle.step_height) {
      does_not_fit("walk leaves the triangle at step " + std::to_string(m + 1));
    }
    values.push_back(std::move(y));
  }
  return values;
}

ForgeResult forge_frequency_witness(const ForgeRequest& req) {
  validate(req);
  const Rational delta = forge_delta(req.g, req.eps, req.mode, req.w);
  const Rational width = 2 * delta;
  const std::int64_t cells = ceil_to_symbol(1 / width);
  const Rational tol = make_rational(1, 3 * req.target.t);
  const auto wlen = static_cast<std::int64_t>(req.w.size());

  std::string last_failure;
  bool last_was_synthesis = false;
  for (int n = req.min_level; n <= req.system.depth(); ++n) {
    const auto res = resolutions(req.system, n);
    const Rational lhs = Rational(static_cast<long>(cells)) * res.max_gap;
    if (!(lhs < width)) {
      last_failure = "level " + std::to_string(n) + ": ceil(1/(2 delta)) * H_n = " + to_string(lhs) +
                     " is not below 2 delta = " + to_string(width);
      // Every step of the anchor recursion is shorter than 2 delta, so K - 1 >= ceil(1/(2 delta)).
      const Rational bound = make_rational(cells * wlen, res.point_count);
      if (!(bound < tol)) {
        last_failure += "; (K-1)|w|/N_n >= " + to_string(bound) + " is not below 1/(3t) = " + to_string(tol);
      }
      last_was_synthesis = false;
      continue;
    }
    const auto points = req.system.points(n);
    EpsilonCover cover = subdiscretize_points(points, n, delta);
    const auto k_minus_1 = static_cast<std::int64_t>(cover.anchors.size()) - 1;
    const Rational ratio = make_rational(k_minus_1 * wlen, res.point_count);
    if (!(ratio < tol)) {
      last_failure = "level " + std::to_string(n) + ": (K-1)|w|/N_n = " + to_string(ratio) +
                     " is not below 1/(3t) = " + to_string(tol);
      last_was_synthesis = false;
      continue;
    }
    Attempt attempt = build_at_level(req, delta, n, points, res.min_gap, std::move(cover));
    if (attempt.result) return std::move(*attempt.result);
    last_failure = attempt.failure;
    last_was_synthesis = attempt.synthesis_failed;
  }
  if (last_was_synthesis) throw ForgeError(ForgeErrorKind::SynthesisInfeasible, last_failure);
  throw ForgeError(ForgeErrorKind::SystemTooShallow, "no provided level admits the construction; " + last_failure);
}

Certificate reverify(const ForgeRequest& req, const ForgeResult& result) {
  const int n = result.level;
  const auto points = req.system.points(n);
  const Rational h = resolutions(req.system, n).min_gap;
  const Rational delta = forge_delta(req.g, req.eps, req.mode, req.w);
  EpsilonCover cover = epsilon_boxes(req.g, req.eps, subdiscretize_points(points, n, delta));

  const auto samples = result.f.sample(points);
  Code q = quantitative_code(result.f, req.system, n);
  Code code = req.mode == ForgeMode::Qualitative ? qualitative_code(q) : std::move(q);

  const Symbol scale = scale_height(req.mode, req.w);
  bool triangles_ok = cover.boxes.size() == result.segments.size();
  for (std::size_t k = 0; triangles_ok && k < cover.boxes.size(); ++k) {
    const std::size_t a = cover.anchors[k].index;
    const std::size_t b = cover.anchors[k + 1].index;
    const Symbol start = image_cell(cover.boxes[k].center_y, h);
    Triangle tri;
    tri.apex_x = points[a + 1];
    tri.apex_y = cell_center(start, h);
    tri.base_x = points[b];
    tri.step_height = Rational(static_cast<long>(scale)) * h;
    tri.half_height = Rational(static_cast<long>(b - a - 1)) * tri.step_height;
    const Box& box = cover.boxes[k];
    triangles_ok = tri.apex_x > box.x_lo && tri.base_x < box.x_hi &&
                   tri.apex_y - tri.half_height > box.y_lo && tri.apex_y + tri.half_height < box.y_hi &&
                   samples[a + 1] == tri.apex_y;
    for (std::size_t i = a + 1; triangles_ok && i <= b; ++i) {
      triangles_ok = abs_rational(samples[i] - tri.apex_y) <= Rational(static_cast<long>(i - a - 1)) * tri.step_height;
    }
  }
  return certify(req, result.f, samples, h, code, cover, result.segments, triangles_ok);
}

std::optional<std::int64_t> max_zigzag_jump(const Rational& eps, const Rational& h) {
  const std::int64_t j = ceil_to_symbol(eps / (2 * h)) - 2;
  if (j < 0) return std::nullopt;
  return j;
}

ZigzagResult forge_zigzag(const PLFunction& g, const Rational& eps, std::int64_t jump,
                          const DiscretizationSystem& system, int n) {
  if (eps <= 0) throw ForgeError(ForgeErrorKind::InvalidRequest, "eps must be positive");
  if (jump < 0) throw ForgeError(ForgeErrorKind::InvalidRequest, "jump must be non-negative");
  if (!system.has_level(n)) throw ForgeError(ForgeErrorKind::InvalidRequest, "unknown level " + std::to_string(n));
  const auto res = resolutions(system, n);
  const Rational h = res.min_gap;
  const std::int64_t amplitude = jump + 1;
  if (!(2 * Rational(static_cast<long>(amplitude)) * h < eps)) {
    throw ForgeError(ForgeErrorKind::JumpTooLarge, "2 (jump + 1) h_n = " +
                                                       to_string(2 * Rational(static_cast<long>(amplitude)) * h) +
                                                       " is not below eps = " + to_string(eps));
  }
  const Rational delta = forge_delta(g, eps, ForgeMode::Qualitative, std::span<const Symbol>{});
  const auto points = system.points(n);
  EpsilonCover cover;
  try {
    cover = epsilon_boxes(g, eps, subdiscretize_points(points, n, delta));
  } catch (const DeltaTooSmall& e) {
    throw ForgeError(ForgeErrorKind::LevelTooCoarse, std::string("zigzag boxes: ") + e.what());
  }

  // Samples alternate between a low and a high cell of each box; both
  // endpoints sit on the low cell of g(0) and g(1) respectively.
  const std::int64_t low_offset = amplitude / 2;
  const std::size_t count = points.size();
  std::vector<Rational> values(count);
  std::size_t box = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Symbol base = 0;
    if (i == 0) {
      base = image_cell(g(0), h);
    } else if (i + 1 == count) {
      base = image_cell(g(1), h);
    } else {
      while (cover.anchors[box + 1].index < i) ++box;
      base = image_cell(cover.boxes[box].center_y, h);
    }
    Symbol cell = base - low_offset;
    if (i % 2 == 1 && i + 1 != count) cell += amplitude;
    values[i] = cell_center(cell, h);
  }

  std::vector<Breakpoint> bps;
  bps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) bps.push_back({points[i], values[i]});

  ZigzagResult r;
  r.f = PLFunction(std::move(bps));
  r.level = n;
  r.jump = jump;
  r.quantitative = quantitative_code_from_samples(values, h, n);
  r.qualitative = qualitative_code(r.quantitative);
  r.stats = stretch_stats(r.quantitative, r.f, h);

  ZigzagCertificate& c = r.certificate;
  const auto& qs = r.quantitative.symbols;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (qs[i] > jump) ++c.above;
    if (qs[i] < -jump) ++c.below;
    const Symbol expected = i % 2 == 0 ? amplitude : -amplitude;
    if (qs[i] != expected) ++c.exceptions;
  }
  const auto N = static_cast<std::int64_t>(count);
  c.counts_ok = 3 * c.above > N && 3 * c.below > N;
  c.exceptions_ok = c.exceptions <= static_cast<std::int64_t>(cover.anchors.size());
  c.zero_free = std::none_of(r.qualitative.symbols.begin(), r.qualitative.symbols.end(),
                             [](Symbol s) { return s == 0; });
  c.ups_ok = 3 * r.stats.ups > jump * N && 3 * r.stats.downs > jump * N;
  c.sup_distance = sup_distance(r.f, g);
  c.sup_ok = c.sup_distance <= eps;
  c.margin = grid_margin(values, h);
  c.margin_ok = c.margin >= h / 4;
  r.cover = std::move(cover);
  if (!c.all()) {
    std::string why;
    if (!c.counts_ok) why += " jump counts do not exceed N_n/3;";
    if (!c.exceptions_ok) why += " more than K exceptional steps;";
    if (!c.zero_free) why += " qualitative code contains 0;";
    if (!c.ups_ok) why += " u_n or d_n not above jump*N_n/3;";
    if (!c.sup_ok) why += " sup distance " + to_string(c.sup_distance) + " exceeds eps;";
    if (!c.margin_ok) why += " margin below h/4;";
    throw ForgeError(ForgeErrorKind::LevelTooCoarse, "zigzag certificate failed at level " + std::to_string(n) + ":" + why);
  }
  return r;
}

void write_certificate(std::ostream& out, const ForgeResult& r) {
  const auto& c = r.certificate;
  out << "level " << r.level << '\n'
      << "delta " << r.delta << '\n'
      << "anchors " << r.cover.anchors.size() << '\n'
      << "realized_frequency " << r.realized_frequency << '\n'
      << "sup_distance " << c.sup_distance << '\n'
      << "sup_ok " << std::boolalpha << c.sup_ok << '\n'
      << "frequency_deviation " << c.frequency_deviation << '\n'
      << "frequency_ok " << c.frequency_ok << '\n'
      << "segments_match " << c.segments_match << '\n'
      << "triangles_contained " << c.triangles_contained << '\n'
      << "margin " << c.margin << '\n'
      << "margin_ok " << c.margin_ok << '\n'
      << "certified " << c.all() << '\n';
}

void write_zigzag_certificate(std::ostream& out, const ZigzagResult& r) {
  const auto& c = r.certificate;
  out << "level " << r.level << '\n'
      << "jump " << r.jump << '\n'
      << "anchors " << r.cover.anchors.size() << '\n'
      << "above " << c.above << '\n'
      << "below " << c.below << '\n'
      << "counts_ok " << std::boolalpha << c.counts_ok << '\n'
      << "exceptions " << c.exceptions << '\n'
      << "exceptions_ok " << c.exceptions_ok << '\n'
      << "zero_free " << c.zero_free << '\n'
      << "ups " << r.stats.ups << '\n'
      << "downs " << r.stats.downs << '\n'
      << "ups_ok " << c.ups_ok << '\n'
      << "sup_distance " << c.sup_distance << '\n'
      << "sup_ok " << c.sup_ok << '\n'
      << "margin " << c.margin << '\n'
      << "margin_ok " << c.margin_ok << '\n'
      << "certified " << c.all() << '\n';
}

}  // namespace curvecode
