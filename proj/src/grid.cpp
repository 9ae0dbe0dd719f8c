#include "curvecode/grid.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace curvecode {

namespace {

constexpr std::int64_t kMaxUniformCells = std::int64_t{1} << 40;

std::int64_t checked_power(int base, int exponent) {
  std::int64_t value = 1;
  for (int i = 0; i < exponent; ++i) {
    if (value > kMaxUniformCells / base) {
      throw GridError(GridErrorKind::InvalidArgument, i + 1,
                      "uniform system too deep: base^depth exceeds 2^40");
    }
    value *= base;
  }
  return value;
}

std::string level_label(int level) { return "level " + std::to_string(level); }

}  // namespace

void DiscretizationSystem::require_level(int n) const {
  if (!has_level(n)) {
    throw GridError(GridErrorKind::UnknownLevel, n,
                    "unknown level " + std::to_string(n) + " (system depth " +
                        std::to_string(depth_) + ")");
  }
}

std::int64_t DiscretizationSystem::point_count(int n) const {
  require_level(n);
  if (generator_ == Generator::Explicit) return static_cast<std::int64_t>(levels_[n - 1].size());
  return checked_power(base_, n) + 1;
}

std::vector<Rational> DiscretizationSystem::points(int n) const {
  require_level(n);
  if (generator_ == Generator::Explicit) return levels_[n - 1];
  const std::int64_t cells = checked_power(base_, n);
  std::vector<Rational> xs;
  xs.reserve(static_cast<std::size_t>(cells + 1));
  const mpz_class den(static_cast<long>(cells));
  for (std::int64_t k = 0; k <= cells; ++k) {
    Rational x(mpz_class(static_cast<long>(k)), den);
    x.canonicalize();
    xs.push_back(std::move(x));
  }
  return xs;
}

bool DiscretizationSystem::is_uniform_level(int n) const {
  require_level(n);
  if (generator_ != Generator::Explicit) return true;
  auto r = resolutions_of(levels_[n - 1], n);
  return r.min_gap == r.max_gap;
}

DiscretizationSystem build_uniform(int base, int depth) {
  if (base < 2) {
    throw GridError(GridErrorKind::InvalidArgument, 0, "uniform base must be >= 2");
  }
  if (depth < 1) {
    throw GridError(GridErrorKind::InvalidArgument, 0, "uniform depth must be >= 1");
  }
  checked_power(base, depth);
  DiscretizationSystem system;
  system.generator_ = base == 2 ? Generator::UniformDyadic : Generator::UniformMAdic;
  system.base_ = base;
  system.depth_ = depth;
  return system;
}

DiscretizationSystem build_explicit(std::vector<std::vector<Rational>> levels) {
  if (levels.empty()) {
    throw GridError(GridErrorKind::InvalidArgument, 0, "a discretization system needs at least one level");
  }
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const int n = static_cast<int>(li) + 1;
    const auto& xs = levels[li];
    if (xs.size() < 2 || xs.front() != 0 || xs.back() != 1) {
      throw GridError(GridErrorKind::MissingEndpoint, n, level_label(n) + " must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i - 1] < xs[i])) {
        throw GridError(GridErrorKind::NotSorted, n,
                        level_label(n) + " is not strictly increasing at " + to_string(xs[i]));
      }
    }
    if (li > 0) {
      const auto& finer = xs;
      for (const auto& x : levels[li - 1]) {
        if (!std::binary_search(finer.begin(), finer.end(), x)) {
          throw GridError(GridErrorKind::NotNested, n,
                          level_label(n) + " is missing point " + to_string(x) + " of " + level_label(n - 1));
        }
      }
    }
  }
  if (levels.size() > 1) {
    auto first = resolutions_of(levels.front(), 1);
    auto last = resolutions_of(levels.back(), static_cast<int>(levels.size()));
    if (!(last.max_gap < first.max_gap)) {
      throw GridError(GridErrorKind::NotRefining, static_cast<int>(levels.size()),
                      "maximal gap of the deepest level does not shrink below level 1's");
    }
  }
  DiscretizationSystem system;
  system.generator_ = Generator::Explicit;
  system.depth_ = static_cast<int>(levels.size());
  system.levels_ = std::move(levels);
  return system;
}

DiscretizationSystem read_system(std::istream& in) {
  std::vector<std::vector<Rational>> levels;
  std::vector<int> line_of_level;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::vector<Rational> level;
    std::string token;
    while (tokens >> token) {
      try {
        level.push_back(parse_rational(token));
      } catch (const ParseError& e) {
        throw GridError(GridErrorKind::InvalidArgument, static_cast<int>(levels.size()) + 1,
                        "line " + std::to_string(line_no) + ": " + e.what(), line_no);
      }
    }
    levels.push_back(std::move(level));
    line_of_level.push_back(line_no);
  }
  try {
    return build_explicit(std::move(levels));
  } catch (const GridError& e) {
    int line_no_of_error = 0;
    if (e.level() >= 1 && e.level() <= static_cast<int>(line_of_level.size())) {
      line_no_of_error = line_of_level[e.level() - 1];
    }
    throw GridError(e.kind(), e.level(), "line " + std::to_string(line_no_of_error) + ": " + e.what(),
                    line_no_of_error);
  }
}

DiscretizationSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridError(GridErrorKind::InvalidArgument, 0, "cannot open system file '" + path + "'");
  return read_system(in);
}

void write_system(std::ostream& out, const DiscretizationSystem& system) {
  for (int n = 1; n <= system.depth(); ++n) {
    const auto xs = system.points(n);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out << ' ';
      out << xs[i];
    }
    out << '\n';
  }
}

LevelResolutions resolutions_of(const std::vector<Rational>& points, int n) {
  LevelResolutions r;
  r.level = n;
  r.point_count = static_cast<std::int64_t>(points.size());
  if (points.size() < 2) {
    throw GridError(GridErrorKind::MissingEndpoint, n, "a level needs at least two points");
  }
  r.min_gap = points[1] - points[0];
  r.max_gap = r.min_gap;
  for (std::size_t i = 2; i < points.size(); ++i) {
    Rational gap = points[i] - points[i - 1];
    if (gap < r.min_gap) r.min_gap = gap;
    if (gap > r.max_gap) r.max_gap = gap;
  }
  return r;
}

LevelResolutions resolutions(const DiscretizationSystem& system, int n) {
  if (!system.has_level(n)) {
    throw GridError(GridErrorKind::UnknownLevel, n, "unknown level " + std::to_string(n));
  }
  if (system.generator() != Generator::Explicit) {
    LevelResolutions r;
    r.level = n;
    r.point_count = system.point_count(n);
    r.min_gap = Rational(mpz_class(1), mpz_class(static_cast<long>(r.point_count - 1)));
    r.max_gap = r.min_gap;
    return r;
  }
  return resolutions_of(system.points(n), n);
}

Symbol image_cell(const Rational& value, const Rational& h) {
  return floor_to_symbol(value / h);
}

}  // namespace curvecode
