#include "curvecode/sturmian.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

namespace curvecode {

namespace {

void require_slope(const LineSpec& spec) {
  if (spec.slope < 0) throw std::invalid_argument("line slope must be non-negative");
}

void require_uniform(const DiscretizationSystem& system, int n) {
  if (!system.is_uniform_level(n)) {
    throw std::invalid_argument("line coding needs a uniform level (h_n = H_n)");
  }
}

}  // namespace

Word cutting_sequence(const LineSpec& spec, std::int64_t length) {
  require_slope(spec);
  if (length < 0) throw std::invalid_argument("cutting sequence length must be non-negative");
  const std::int64_t limit = spec.extent > 0 ? spec.extent : std::numeric_limits<std::int64_t>::max();
  Word out;
  out.reserve(static_cast<std::size_t>(std::min<std::int64_t>(length, 1 << 24)));

  // The next horizontal line above the starting height; a line starting on
  // Y = m integer only crosses it at X = 0, which is excluded.
  Symbol next_row = floor_to_symbol(spec.intercept) + 1;
  std::int64_t column = 1;  // next vertical line X = column
  while (static_cast<std::int64_t>(out.size()) < length) {
    // Height at the next vertical crossing decides the order of events.
    const bool column_inside = column < limit;
    const Rational y_at_column = spec.slope * Rational(static_cast<long>(column)) + spec.intercept;
    if (spec.slope > 0) {
      const Rational row(static_cast<long>(next_row));
      if (y_at_column > row || !column_inside) {
        // Horizontal crossing before the vertical one (or past the last column).
        const Rational x = (row - spec.intercept) / spec.slope;
        if (x >= Rational(static_cast<long>(limit))) break;
        out.push_back(1);
        ++next_row;
        continue;
      }
      if (y_at_column == row) {
        throw LatticeHit("line passes through lattice point (" + std::to_string(column) + ", " +
                             std::to_string(next_row) + ")",
                         column, next_row);
      }
    } else if (y_at_column.get_den() == 1) {
      throw LatticeHit("horizontal line on an integer height meets lattice point (" + std::to_string(column) +
                           ", " + to_string(y_at_column) + ")",
                       column, floor_to_symbol(y_at_column));
    }
    if (!column_inside) break;
    out.push_back(0);
    ++column;
  }
  return out;
}

Word cutting_sequence_in_extent(const LineSpec& spec) {
  if (spec.extent <= 0) throw std::invalid_argument("extent must be positive");
  return cutting_sequence(spec, std::numeric_limits<std::int64_t>::max());
}

Code line_stretched_code(const LineSpec& spec, const DiscretizationSystem& system, int n) {
  require_slope(spec);
  require_uniform(system, n);
  const Rational h = resolutions(system, n).min_gap;
  const PLFunction f = PLFunction::line(spec.slope, spec.intercept * h);
  return stretched_code(quantitative_code(f, system, n));
}

SequenceComparison compare_sequences(std::span<const Symbol> a, std::span<const Symbol> b) {
  SequenceComparison c;
  const std::size_t common = std::min(a.size(), b.size());
  c.common_length = static_cast<std::int64_t>(common);
  for (std::size_t i = 0; i < common; ++i) c.mismatches += a[i] != b[i];
  c.length_difference = static_cast<std::int64_t>(a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
  return c;
}

SequenceComparison compare_with_cutting(const LineSpec& spec, const DiscretizationSystem& system, int n) {
  const Code s = line_stretched_code(spec, system, n);
  LineSpec matched = spec;
  matched.extent = system.point_count(n) - 1;
  const Word cut = cutting_sequence_in_extent(matched);
  return compare_sequences(s.symbols, cut);
}

std::vector<ConvergenceRow> frequency_convergence(const LineSpec& spec, const DiscretizationSystem& system,
                                                  const std::vector<int>& levels) {
  require_slope(spec);
  std::vector<ConvergenceRow> rows;
  for (int n : levels) {
    require_uniform(system, n);
    const Rational h = resolutions(system, n).min_gap;
    const PLFunction f = PLFunction::line(spec.slope, spec.intercept * h);
    const Code q = quantitative_code(f, system, n);
    const StretchStats st = stretch_stats(q, f, h);
    ConvergenceRow row;
    row.level = n;
    row.point_count = st.point_count;
    row.ups = st.ups;
    row.downs = st.downs;
    row.variation = st.variation;
    row.up_frequency = st.up_frequency.value_or(Rational(0));
    row.up_ratio = st.up_ratio;
    const std::int64_t crossings = st.ups + st.point_count - 2;
    if (crossings > 0) row.crossing_ratio = Rational(static_cast<long>(st.ups)) / Rational(static_cast<long>(crossings));
    rows.push_back(std::move(row));
  }
  return rows;
}

Rational crossing_share_limit(const Rational& slope) { return slope / (1 + slope); }

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "n,N_n,u_n,d_n,V_n,fr_1_s,u_over_V,crossing_ratio\n";
  out << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.level << ',' << r.point_count << ',' << r.ups << ',' << r.downs << ',' << r.variation << ','
        << to_double(r.up_frequency) << ',';
    if (r.up_ratio) out << to_double(*r.up_ratio);
    out << ',';
    if (r.crossing_ratio) out << to_double(*r.crossing_ratio);
    out << '\n';
  }
}

}  // namespace curvecode
