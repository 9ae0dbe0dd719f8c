#include "curvecode/sturmian.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace curvecode;

TEST_SUITE("sturmian") {

TEST_CASE("cutting sequences of simple lines") {
  const Word half = cutting_sequence({Rational(1, 2), Rational(1, 4), 0}, 30);
  CHECK(half.size() == 30);
  CHECK(frequency(Word{1}, half) == Rational(1, 3));

  const Word flat = cutting_sequence({Rational(1, 100), Rational(1, 200), 0}, 99);
  CHECK(std::all_of(flat.begin(), flat.end(), [](Symbol s) { return s == 0; }));

  const Word diag = cutting_sequence({Rational(1), Rational(1, 2), 0}, 20);
  for (std::size_t i = 0; i < diag.size(); ++i) CHECK(diag[i] == static_cast<Symbol>((i + 1) % 2));
}

TEST_CASE("cutting sequences match the sorted-crossings oracle") {
  gen::Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const std::int64_t q = gen::uniform_int(rng, 1, 60);
    const std::int64_t p = gen::uniform_int(rng, 0, 150);
    const LineSpec spec{make_rational(p, q), make_rational(1, 2 * q), gen::uniform_int(rng, 1, 80)};
    CHECK(cutting_sequence_in_extent(spec) == oracle::cutting_sequence(spec.slope, spec.intercept, spec.extent));
  }
}

TEST_CASE("lattice hits are rejected") {
  try {
    cutting_sequence({Rational(1, 2), Rational(0), 0}, 10);
    FAIL("expected LatticeHit");
  } catch (const LatticeHit& e) {
    CHECK(e.x() == 2);
    CHECK(e.y() == 1);
  }
  CHECK_THROWS_AS(cutting_sequence({Rational(0), Rational(1), 0}, 3), LatticeHit);
  CHECK_THROWS_AS(cutting_sequence({Rational(-1), Rational(1, 3), 0}, 3), std::invalid_argument);
}

TEST_CASE("rational slopes give period p + q") {
  gen::Rng rng(47);
  for (int i = 0; i < 40; ++i) {
    const std::int64_t q = gen::uniform_int(rng, 1, 40);
    const std::int64_t p = gen::uniform_int(rng, 1, 40);
    const Rational slope = make_rational(p, q);
    const std::int64_t period = slope.get_num().get_si() + slope.get_den().get_si();
    const Word s = cutting_sequence({slope, make_rational(1, 2 * q), 0}, 5 * period);
    for (std::size_t j = 0; j + static_cast<std::size_t>(period) < s.size(); ++j) {
      REQUIRE(s[j] == s[j + static_cast<std::size_t>(period)]);
    }
  }
}

TEST_CASE("stretched line codes align with cutting sequences") {
  const auto s = build_uniform(2, 10);
  const LineSpec spec{Rational(1, 2), Rational(1, 4), 0};
  const Code code = line_stretched_code(spec, s, 3);
  CHECK(code.symbols == Word{0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0});
  for (int n = 1; n <= 10; ++n) {
    const auto cmp = compare_with_cutting(spec, s, n);
    CHECK(cmp.mismatches == 0);
    CHECK(cmp.length_difference == 1);
    CHECK(cmp.discrepancy() <= 2);
  }
  const Code flat = line_stretched_code({Rational(0), Rational(1, 3), 0}, s, 4);
  CHECK(std::all_of(flat.symbols.begin(), flat.symbols.end(), [](Symbol v) { return v == 0; }));
  CHECK(compare_with_cutting({Rational(0), Rational(1, 3), 0}, s, 4).discrepancy() <= 2);

  const auto explicit_system = build_explicit({{0, 1}, {0, Rational(1, 3), 1}});
  CHECK_THROWS_AS(line_stretched_code(spec, explicit_system, 2), std::invalid_argument);
}

TEST_CASE("symbol multisets agree at matched scales") {
  gen::Rng rng(53);
  const auto s = build_uniform(3, 6);
  for (int i = 0; i < 30; ++i) {
    const std::int64_t q = gen::uniform_int(rng, 1, 500);
    const LineSpec spec{make_rational(gen::uniform_int(rng, 1, 3 * q), q), make_rational(1, 2 * q), 0};
    const int n = static_cast<int>(gen::uniform_int(rng, 1, 6));
    const Code code = line_stretched_code(spec, s, n);
    LineSpec matched = spec;
    matched.extent = s.point_count(n) - 1;
    const Word cut = cutting_sequence_in_extent(matched);
    CHECK(std::count(code.symbols.begin(), code.symbols.end(), -1) == 0);
    CHECK(std::count(code.symbols.begin(), code.symbols.end(), 1) == std::count(cut.begin(), cut.end(), 1));
    CHECK(std::count(code.symbols.begin(), code.symbols.end(), 0) == std::count(cut.begin(), cut.end(), 0) + 1);
  }
}

TEST_CASE("frequency convergence table") {
  const auto s = build_uniform(2, 14);
  const auto rows = frequency_convergence({Rational(1, 2), Rational(1, 4), 0}, s, {4, 8, 14});
  REQUIRE(rows.size() == 3);
  Rational prev_gap = 1;
  for (const auto& r : rows) {
    CHECK(r.downs == 0);
    CHECK(*r.up_ratio == 1);
    const Rational gap = abs_rational(*r.crossing_ratio - Rational(1, 3));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < Rational(1, 1000));

  const auto one = frequency_convergence({Rational(1), Rational(1, 2), 0}, s, {12});
  CHECK(abs_rational(*one[0].crossing_ratio - Rational(1, 2)) < Rational(1, 1000));

  const auto flat = frequency_convergence({Rational(0), Rational(1, 3), 0}, s, {5});
  CHECK_FALSE(flat[0].up_ratio.has_value());

  std::ostringstream csv;
  write_convergence_csv(csv, rows);
  CHECK(csv.str().rfind("n,N_n,u_n,d_n,V_n,fr_1_s,u_over_V,crossing_ratio\n4,17,8,0,8,", 0) == 0);
  CHECK(crossing_share_limit(Rational(1, 2)) == Rational(1, 3));
}

}  // TEST_SUITE
