#include "curvecode/forge.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace curvecode;

namespace {

ForgeRequest request(PLFunction g, Word w, Rational alpha, std::int64_t t, ForgeMode mode, int depth) {
  ForgeRequest r;
  r.g = std::move(g);
  r.eps = Rational(1, 10);
  r.w = std::move(w);
  r.target = {std::move(alpha), t};
  r.mode = mode;
  r.system = build_uniform(2, depth);
  return r;
}

// Checks the certificate claims against the oracles, independently of reverify.
void check_independently(const ForgeRequest& req, const ForgeResult& res) {
  const auto xs = req.system.points(res.level);
  const Rational h = resolutions(req.system, res.level).min_gap;
  const auto q = oracle::quantitative(res.f, xs, h);
  std::vector<Symbol> code = q;
  if (req.mode == ForgeMode::Qualitative) {
    for (auto& s : code) s = (s > 0) - (s < 0);
  }
  CHECK(code == res.code.symbols);
  const Rational fr = make_rational(oracle::occurrences(req.w, code), static_cast<std::int64_t>(code.size()));
  CHECK(fr == res.realized_frequency);
  CHECK(abs_rational(fr - req.target.alpha) <= make_rational(1, req.target.t));
  // Sup distance over the union of breakpoints, evaluated by the oracle.
  Rational worst = 0;
  for (const auto* fn : {&res.f, &req.g}) {
    for (const auto& b : fn->breakpoints()) {
      worst = std::max(worst, abs_rational(oracle::eval(res.f, b.x) - oracle::eval(req.g, b.x)));
    }
  }
  CHECK(worst <= req.eps);
  for (std::size_t k = 0; k < res.segments.size(); ++k) {
    const auto first = res.cover.anchors[k].index + 1;
    CHECK(std::equal(res.segments[k].begin(), res.segments[k].end(), code.begin() + static_cast<std::ptrdiff_t>(first)));
  }
}

}  // namespace

TEST_SUITE("forge") {

TEST_CASE("qualitative witness for w = [1]") {
  const auto req = request(PLFunction::constant(0), Word{1}, Rational(1, 2), 10, ForgeMode::Qualitative, 12);
  const auto res = forge_frequency_witness(req);
  CHECK(res.certificate.all());
  CHECK(res.certificate.sup_distance <= Rational(1, 10));
  CHECK(res.certificate.frequency_deviation <= Rational(1, 10));
  CHECK(res.certificate.margin >= resolutions(req.system, res.level).min_gap / 4);
  const auto again = reverify(req, res);
  CHECK(again.all());
  CHECK(again.sup_distance == res.certificate.sup_distance);
  CHECK(again.frequency_deviation == res.certificate.frequency_deviation);
  check_independently(req, res);
}

TEST_CASE("zero target frequency avoids the word") {
  const auto req = request(PLFunction::identity(), Word{1, 1}, Rational(0), 10, ForgeMode::Qualitative, 12);
  const auto res = forge_frequency_witness(req);
  CHECK(res.realized_frequency == 0);
  check_independently(req, res);
}

TEST_CASE("quantitative witness for w = [3, -3]") {
  const auto req = request(PLFunction::identity(), Word{3, -3}, Rational(1, 4), 5, ForgeMode::Quantitative, 14);
  const auto res = forge_frequency_witness(req);
  CHECK(res.certificate.all());
  CHECK(res.code.kind == CodeKind::Quantitative);
  CHECK(occurrences(Word{3, -3}, res.code.symbols) > 0);
  CHECK(reverify(req, res).all());
  check_independently(req, res);
}

TEST_CASE("requests are validated") {
  auto bad_alpha = request(PLFunction::constant(0), Word{0, 1, 0}, Rational(2, 3), 10, ForgeMode::Qualitative, 8);
  CHECK_THROWS_AS(forge_frequency_witness(bad_alpha), ForgeError);
  auto bad_symbol = request(PLFunction::constant(0), Word{2}, Rational(1, 2), 10, ForgeMode::Qualitative, 8);
  CHECK_THROWS_AS(forge_frequency_witness(bad_symbol), ForgeError);
}

TEST_CASE("shallow systems report the failing inequality") {
  const auto req = request(PLFunction::constant(0), Word{1}, Rational(1, 2), 100, ForgeMode::Qualitative, 2);
  try {
    forge_frequency_witness(req);
    FAIL("expected SystemTooShallow");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ForgeErrorKind::SystemTooShallow);
    CHECK(std::string(e.what()).find("level 2") != std::string::npos);
  }
}

TEST_CASE("segment inscription") {
  const Rational h(1, 64);
  Box box;
  box.x_lo = 0;
  box.x_hi = Rational(1, 2);
  box.center_x = Rational(1, 4);
  box.center_y = 0;
  box.y_lo = Rational(-1, 4);
  box.y_hi = Rational(1, 4);
  std::vector<Rational> xs;
  for (int i = 1; i <= 5; ++i) xs.push_back(make_rational(i, 16));
  Triangle tri{xs.front(), h / 2, xs.back(), 4 * h, h};

  const auto flat = inscribe_segment(box, tri, Word{0, 0, 0, 0}, xs, h, 0);
  for (const auto& y : flat) CHECK(y == h / 2);

  const Word alt{1, -1, 1, -1};
  const auto walk = inscribe_segment(box, tri, alt, xs, h, 0);
  CHECK(quantitative_code_from_samples(walk, h, 0).symbols == alt);

  const auto climb = inscribe_segment(box, tri, Word{1, 1, 1, 1}, xs, h, 0);
  CHECK(climb.back() == tri.apex_y + tri.half_height);

  Triangle tight = tri;
  tight.step_height = h / 2;
  CHECK_THROWS_AS(inscribe_segment(box, tight, Word{1, 0, 0, 0}, xs, h, 0), ForgeError);
  Box small = box;
  small.y_hi = Rational(1, 32);
  CHECK_THROWS_AS(inscribe_segment(small, tri, Word{0, 0, 0, 0}, xs, h, 0), ForgeError);
}

TEST_CASE("zigzag witness") {
  const auto s = build_uniform(2, 8);
  const auto r = forge_zigzag(PLFunction::constant(0), Rational(1, 4), 3, s, 8);
  const auto& c = r.certificate;
  CHECK(c.all());
  const std::int64_t N = s.point_count(8);
  CHECK(3 * c.above > N);
  CHECK(3 * c.below > N);
  CHECK(c.exceptions <= static_cast<std::int64_t>(r.cover.anchor_count()));
  CHECK(std::none_of(r.qualitative.symbols.begin(), r.qualitative.symbols.end(), [](Symbol v) { return v == 0; }));
  CHECK(r.stats.net == 0);
  CHECK(abs_rational(*r.stats.up_ratio - Rational(1, 2)) <=
        make_rational(static_cast<std::int64_t>(r.cover.anchor_count()), r.stats.variation));
  CHECK(r.quantitative.symbols == oracle::quantitative(r.f, s.points(8), resolutions(s, 8).min_gap));
}

TEST_CASE("zigzag preconditions") {
  const auto s = build_uniform(2, 8);
  CHECK(*max_zigzag_jump(Rational(1, 4), Rational(1, 256)) == 30);
  CHECK_FALSE(max_zigzag_jump(Rational(1, 4), Rational(1, 4)).has_value());
  try {
    forge_zigzag(PLFunction::constant(0), Rational(1, 4), 31, s, 8);
    FAIL("expected JumpTooLarge");
  } catch (const ForgeError& e) {
    CHECK(e.kind() == ForgeErrorKind::JumpTooLarge);
  }
  const auto r = forge_zigzag(PLFunction::constant(0), Rational(1, 4), 30, s, 8);
  CHECK(r.certificate.all());
}

TEST_CASE("zigzag around rising targets") {
  const auto s = build_uniform(2, 10);
  const auto g = PLFunction::line(Rational(1, 2), 0);
  const auto r = forge_zigzag(g, Rational(1, 10), 5, s, 10);
  CHECK(r.certificate.all());
  CHECK(r.stats.net > 0);
  CHECK(*r.stats.up_ratio == *r.stats.identity_with_net);
}

TEST_CASE("certificate records") {
  const auto req = request(PLFunction::constant(0), Word{1}, Rational(1, 2), 10, ForgeMode::Qualitative, 12);
  const auto res = forge_frequency_witness(req);
  std::ostringstream out;
  write_certificate(out, res);
  CHECK(out.str().find("sup_ok true") != std::string::npos);
  CHECK(out.str().find("frequency_ok true") != std::string::npos);
  CHECK(out.str().find("certified true") != std::string::npos);
}

}  // TEST_SUITE
