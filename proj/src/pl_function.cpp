#include "curvecode/pl_function.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace curvecode {

namespace {

Rational interpolate(const Breakpoint& a, const Breakpoint& b, const Rational& x) {
  if (x == a.x) return a.y;
  if (x == b.x) return b.y;
  return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

}  // namespace

PLFunction::PLFunction(std::vector<Breakpoint> breakpoints) : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) throw PLFunctionError("a PL function needs at least two breakpoints");
  if (breakpoints_.front().x != 0 || breakpoints_.back().x != 1) {
    throw PLFunctionError("PL breakpoints must start at x = 0 and end at x = 1");
  }
  max_abs_slope_ = 0;
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    const auto& a = breakpoints_[i - 1];
    const auto& b = breakpoints_[i];
    if (!(a.x < b.x)) {
      throw PLFunctionError("PL abscissae must be strictly increasing (at x = " + to_string(b.x) + ")");
    }
    Rational slope = abs_rational((b.y - a.y) / (b.x - a.x));
    if (slope > max_abs_slope_) max_abs_slope_ = slope;
  }
}

PLFunction PLFunction::constant(const Rational& c) { return PLFunction({{0, c}, {1, c}}); }

PLFunction PLFunction::line(const Rational& slope, const Rational& intercept) {
  return PLFunction({{0, intercept}, {1, intercept + slope}});
}

Rational PLFunction::operator()(const Rational& x) const {
  if (x < 0 || x > 1) throw PLFunctionError("evaluation outside [0,1] at x = " + to_string(x));
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x,
                             [](const Breakpoint& b, const Rational& v) { return b.x < v; });
  if (it->x == x) return it->y;
  return interpolate(*(it - 1), *it, x);
}

std::vector<Rational> PLFunction::sample(std::span<const Rational> xs) const {
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  std::size_t seg = 1;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& x = xs[i];
    if (x < 0 || x > 1) throw PLFunctionError("evaluation outside [0,1] at x = " + to_string(x));
    if (i > 0 && x < xs[i - 1]) throw PLFunctionError("sample abscissae must be non-decreasing");
    while (seg + 1 < breakpoints_.size() && breakpoints_[seg].x < x) ++seg;
    ys.push_back(interpolate(breakpoints_[seg - 1], breakpoints_[seg], x));
  }
  return ys;
}

Rational sup_distance(const PLFunction& f, const PLFunction& g) {
  std::vector<Rational> xs;
  xs.reserve(f.breakpoints().size() + g.breakpoints().size());
  for (const auto& b : f.breakpoints()) xs.push_back(b.x);
  for (const auto& b : g.breakpoints()) xs.push_back(b.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const auto fy = f.sample(xs);
  const auto gy = g.sample(xs);
  Rational best = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational d = abs_rational(fy[i] - gy[i]);
    if (d > best) best = d;
  }
  return best;
}

PLFunction read_pl_function(std::istream& in) {
  std::vector<Breakpoint> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream tokens(line);
    std::string xs, ys, extra;
    if (!(tokens >> xs >> ys) || (tokens >> extra)) {
      throw PLFunctionError("line " + std::to_string(line_no) + ": expected two columns 'x y'");
    }
    try {
      points.push_back({parse_rational(xs), parse_rational(ys)});
    } catch (const ParseError& e) {
      throw PLFunctionError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return PLFunction(std::move(points));
}

PLFunction load_pl_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PLFunctionError("cannot open function file '" + path + "'");
  return read_pl_function(in);
}

void write_pl_function(std::ostream& out, const PLFunction& f) {
  for (const auto& b : f.breakpoints()) out << b.x << ' ' << b.y << '\n';
}

}  // namespace curvecode
