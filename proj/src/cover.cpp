#include "curvecode/cover.hpp"

#include <algorithm>
#include <ostream>

namespace curvecode {

Rational modulus(const PLFunction& g, const Rational& eps) {
  if (eps <= 0) throw std::invalid_argument("modulus: eps must be positive");
  if (g.max_abs_slope() == 0) return 1;
  return eps / g.max_abs_slope();
}

EpsilonCover subdiscretize_points(const std::vector<Rational>& points, int n, const Rational& delta) {
  const auto res = resolutions_of(points, n);
  const Rational width = 2 * delta;
  if (!(width > res.max_gap)) {
    throw DeltaTooSmall("2*delta = " + to_string(width) + " does not exceed H_n = " + to_string(res.max_gap));
  }
  EpsilonCover cover;
  cover.level = n;
  cover.delta = delta;
  cover.anchors.push_back({0, points.front()});
  const std::size_t last = points.size() - 1;
  while (cover.anchors.back().index != last) {
    const Rational limit = cover.anchors.back().x + width;
    // First point not below the limit; the anchor is the one before it.
    auto it = std::lower_bound(points.begin(), points.end(), limit);
    std::size_t next = static_cast<std::size_t>(it - points.begin()) - 1;
    next = std::min(next, last);
    cover.gaps.push_back(static_cast<std::int64_t>(next - cover.anchors.back().index));
    cover.anchors.push_back({next, points[next]});
  }
  return cover;
}

EpsilonCover subdiscretize(const DiscretizationSystem& system, int n, const Rational& delta) {
  return subdiscretize_points(system.points(n), n, delta);
}

EpsilonCover epsilon_boxes(const PLFunction& g, const Rational& eps, EpsilonCover cover) {
  if (eps <= 0) throw std::invalid_argument("epsilon_boxes: eps must be positive");
  cover.epsilon = eps;
  cover.boxes.clear();
  const Rational half = eps / 2;
  for (std::size_t k = 0; k + 1 < cover.anchors.size(); ++k) {
    Box b;
    b.x_lo = cover.anchors[k].x;
    b.x_hi = b.x_lo + 2 * cover.delta;
    b.center_x = (cover.anchors[k].x + cover.anchors[k + 1].x) / 2;
    b.center_y = g(b.center_x);
    b.y_lo = b.center_y - half;
    b.y_hi = b.center_y + half;
    cover.boxes.push_back(std::move(b));
  }
  return cover;
}

CoverReport inspect_cover(const EpsilonCover& cover, const PLFunction& g) {
  CoverReport report;
  bool first = true;
  const Rational half = cover.epsilon / 2;
  for (std::size_t k = 0; k < cover.boxes.size(); ++k) {
    const Box& b = cover.boxes[k];
    const Rational hi = b.x_hi < 1 ? b.x_hi : Rational(1);
    std::vector<Rational> xs{b.x_lo, hi};
    for (const auto& bp : g.breakpoints()) {
      if (bp.x > b.x_lo && bp.x < hi) xs.push_back(bp.x);
    }
    for (const auto& x : xs) {
      // Over the open box, sup |g(x) - y| = |g(x) - center_y| + eps/2.
      Rational dev = abs_rational(g(x) - b.center_y) + half;
      if (first || dev > report.max_deviation) {
        report.max_deviation = dev;
        report.worst_box = k;
        report.witness_x = x;
        first = false;
      }
    }
  }
  report.passes = report.max_deviation <= cover.epsilon;
  return report;
}

CoverReport verify_cover(const EpsilonCover& cover, const PLFunction& g) {
  auto report = inspect_cover(cover, g);
  if (!report.passes) {
    const Box& b = cover.boxes[report.worst_box];
    const Rational gx = g(report.witness_x);
    const Rational y = gx >= b.center_y ? b.y_lo : b.y_hi;
    throw CoverViolation("box " + std::to_string(report.worst_box + 1) + " reaches deviation " +
                             to_string(report.max_deviation) + " > eps at x = " + to_string(report.witness_x),
                         report.worst_box, report.witness_x, y);
  }
  return report;
}

CountReport count_check(const Rational& delta, const Rational& max_gap, std::int64_t observed_k) {
  CountReport r;
  const Rational inverse = 1 / (2 * delta);
  r.cells = ceil_to_symbol(inverse);
  r.hypothesis_lhs = Rational(static_cast<long>(r.cells)) * max_gap;
  r.hypothesis_rhs = 2 * delta;
  r.hypothesis_holds = r.hypothesis_lhs < r.hypothesis_rhs;
  r.predicted = r.cells + 1;
  r.observed = observed_k;
  if (!r.hypothesis_holds) {
    r.outcome = CountOutcome::HypothesisFails;
  } else if (r.observed == r.predicted) {
    r.outcome = CountOutcome::Matches;
  } else if (inverse.get_den() == 1) {
    r.outcome = CountOutcome::IntegerBoundary;
  } else {
    r.outcome = CountOutcome::Exceeds;
  }
  return r;
}

void write_cover(std::ostream& out, const EpsilonCover& cover) {
  out << "# k x_ik l_k x_lo x_hi y_lo y_hi\n";
  for (std::size_t k = 0; k < cover.boxes.size(); ++k) {
    const Box& b = cover.boxes[k];
    out << (k + 1) << ' ' << cover.anchors[k].x << ' ' << cover.gaps[k] << ' ' << b.x_lo << ' ' << b.x_hi << ' '
        << b.y_lo << ' ' << b.y_hi << '\n';
  }
}

}  // namespace curvecode
