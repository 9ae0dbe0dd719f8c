#include "curvecode/codec.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace curvecode {

namespace {

void require_quantitative(const Code& code, const char* op) {
  if (code.kind != CodeKind::Quantitative) {
    throw CodecError(std::string(op) + ": expected a quantitative code, got " + std::string(kind_name(code.kind)));
  }
}

Symbol sign_of(Symbol v) { return (v > 0) - (v < 0); }

}  // namespace

std::string_view kind_name(CodeKind kind) {
  switch (kind) {
    case CodeKind::Quantitative: return "quantitative";
    case CodeKind::Qualitative: return "qualitative";
    case CodeKind::Stretched: return "stretched";
  }
  return "unknown";
}

Code quantitative_code_from_samples(std::span<const Rational> values, const Rational& h, int level) {
  if (h <= 0) throw CodecError("image grid step must be positive");
  Code code{CodeKind::Quantitative, level, {}};
  if (values.empty()) return code;
  code.symbols.reserve(values.size() - 1);
  Symbol previous = image_cell(values[0], h);
  for (std::size_t i = 1; i < values.size(); ++i) {
    Symbol cell = image_cell(values[i], h);
    code.symbols.push_back(cell - previous);
    previous = cell;
  }
  return code;
}

Code quantitative_code(const PLFunction& f, const DiscretizationSystem& system, int n) {
  const auto xs = system.points(n);
  const auto res = resolutions(system, n);
  const auto ys = f.sample(xs);
  return quantitative_code_from_samples(ys, res.min_gap, n);
}

Code qualitative_code(const Code& quantitative) {
  require_quantitative(quantitative, "qualitative_code");
  Code q{CodeKind::Qualitative, quantitative.level, {}};
  q.symbols.reserve(quantitative.symbols.size());
  for (Symbol v : quantitative.symbols) q.symbols.push_back(sign_of(v));
  return q;
}

Code stretched_code(const Code& quantitative) {
  require_quantitative(quantitative, "stretched_code");
  Code s{CodeKind::Stretched, quantitative.level, {}};
  std::size_t total = quantitative.symbols.size();
  for (Symbol v : quantitative.symbols) total += static_cast<std::size_t>(v < 0 ? -v : v);
  s.symbols.reserve(total);
  for (Symbol v : quantitative.symbols) {
    const Symbol step = sign_of(v);
    for (Symbol k = 0; k < (v < 0 ? -v : v); ++k) s.symbols.push_back(step);
    s.symbols.push_back(0);
  }
  return s;
}

std::vector<Symbol> unstretch(std::span<const Symbol> stretched) {
  std::vector<Symbol> q;
  Symbol run = 0;
  for (Symbol v : stretched) {
    if (v == 0) {
      q.push_back(run);
      run = 0;
    } else if (v == 1 || v == -1) {
      if (run != 0 && sign_of(run) != v) throw CodecError("unstretch: mixed signs inside one run");
      run += v;
    } else {
      throw CodecError("unstretch: symbol outside {-1,0,1}");
    }
  }
  if (run != 0) throw CodecError("unstretch: trailing run without terminating 0");
  return q;
}

StretchStats stretch_stats(const Code& quantitative, const PLFunction& f, const Rational& h) {
  require_quantitative(quantitative, "stretch_stats");
  StretchStats st;
  for (Symbol v : quantitative.symbols) {
    if (v > 0) st.ups += v;
    else st.downs += -v;
  }
  st.variation = st.ups + st.downs;
  st.zeros = static_cast<std::int64_t>(quantitative.symbols.size());
  st.point_count = st.zeros + 1;
  st.net = st.ups - st.downs;
  st.floor_drift = floor_to_symbol((f(1) - f(0)) / h);
  if (st.variation > 0) st.up_ratio = make_rational(st.ups, st.variation);
  if (st.ups > 0) {
    st.identity_with_net = 1 / (2 - make_rational(st.net, st.ups));
    Rational denom = 2 - make_rational(st.floor_drift, st.ups);
    if (denom != 0) st.identity_with_floor = 1 / denom;
  }
  if (st.stretched_length() > 0) st.up_frequency = make_rational(st.ups, st.stretched_length());
  return st;
}

Rational grid_margin(std::span<const Rational> values, const Rational& h) {
  std::optional<Rational> best;
  for (const auto& v : values) {
    Rational below = v - image_cell(v, h) * h;
    Rational above = h - below;
    Rational d = below < above ? below : above;
    if (!best || d < *best) best = d;
  }
  return best.value_or(h);
}

void write_code(std::ostream& out, const Code& code) {
  out << kind_name(code.kind) << ' ' << code.level << ' ' << code.symbols.size() << '\n';
  for (std::size_t i = 0; i < code.symbols.size(); ++i) {
    if (i) out << ' ';
    out << code.symbols[i];
  }
  out << '\n';
}

Code read_code(std::istream& in) {
  std::string kind;
  int level = 0;
  std::size_t length = 0;
  if (!(in >> kind >> level >> length)) throw CodecError("code file: malformed header");
  Code code;
  if (kind == "quantitative") code.kind = CodeKind::Quantitative;
  else if (kind == "qualitative") code.kind = CodeKind::Qualitative;
  else if (kind == "stretched") code.kind = CodeKind::Stretched;
  else throw CodecError("code file: unknown kind '" + kind + "'");
  code.level = level;
  code.symbols.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (!(in >> code.symbols[i])) throw CodecError("code file: fewer symbols than the header announces");
  }
  return code;
}

}  // namespace curvecode
