#include "curvecode/cli.hpp"

#include "curvecode/codec.hpp"
#include "curvecode/cover.hpp"
#include "curvecode/forge.hpp"
#include "curvecode/grid.hpp"
#include "curvecode/pl_function.hpp"
#include "curvecode/sturmian.hpp"
#include "curvecode/svg.hpp"
#include "curvecode/words.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace curvecode {

namespace {

constexpr const char* kVersion = "0.1.0";

namespace fs = std::filesystem;

// Exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string system = "uniform:2";
  int depth = 10;
  std::string function = "identity";
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string levels;
  bool levels_given = false;
};

void add_common(CLI::App* sub, CommonOptions& c) {
  sub->add_option("--system", c.system, "uniform:<base> or a system file")->capture_default_str();
  sub->add_option("--depth", c.depth, "depth of a uniform system")->capture_default_str();
  sub->add_option("--function", c.function,
                  "zero | identity | const:<c> | line:<slope>:<intercept> | zigzag[:<amp>:<teeth>] | breakpoint file")
      ->capture_default_str();
  sub->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "concurrent levels")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed for randomized drivers")->capture_default_str();
  sub->add_option("--levels", c.levels, "levels as a..b or a,b,c (default: all)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Rational rational_option(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw ValidationError("--" + name + ": " + e.what());
  }
}

DiscretizationSystem make_system(const CommonOptions& c) {
  if (c.system.rfind("uniform:", 0) == 0 || c.system == "dyadic") {
    int base = 2;
    if (c.system != "dyadic") {
      try {
        base = std::stoi(c.system.substr(8));
      } catch (const std::exception&) {
        throw ValidationError("--system: bad uniform base in '" + c.system + "'");
      }
    }
    if (c.depth < 1) throw ValidationError("--depth must be >= 1");
    return build_uniform(base, c.depth);
  }
  if (!fs::exists(c.system)) throw ValidationError("system file '" + c.system + "' does not exist");
  return load_system(c.system);
}

PLFunction zigzag_function(const Rational& amplitude, int teeth) {
  if (teeth < 1) throw ValidationError("zigzag needs at least one tooth");
  std::vector<Breakpoint> bps;
  for (int j = 0; j <= 2 * teeth; ++j) {
    bps.push_back({make_rational(j, 2 * teeth), j % 2 ? amplitude : Rational(0)});
  }
  return PLFunction(std::move(bps));
}

PLFunction make_function(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& name = parts.empty() ? spec : parts[0];
  auto arg = [&](std::size_t i, const char* fallback) {
    return rational_option("function", i < parts.size() ? parts[i] : std::string(fallback));
  };
  if (name == "zero" && parts.size() == 1) return PLFunction::constant(0);
  if (name == "identity" && parts.size() == 1) return PLFunction::identity();
  if (name == "const" && parts.size() == 2) return PLFunction::constant(arg(1, "0"));
  if (name == "line" && parts.size() <= 3 && parts.size() >= 2) return PLFunction::line(arg(1, "1"), arg(2, "0"));
  if (name == "zigzag" && (parts.size() == 1 || parts.size() == 3)) {
    const Rational teeth = arg(2, "2");
    if (teeth.get_den() != 1) throw ValidationError("zigzag teeth must be an integer");
    return zigzag_function(arg(1, "1/2"), static_cast<int>(teeth.get_num().get_si()));
  }
  if (!fs::exists(spec)) throw ValidationError("function '" + spec + "' is neither a builtin nor an existing file");
  return load_pl_function(spec);
}

std::vector<int> parse_levels(const CommonOptions& c, const DiscretizationSystem& system) {
  std::vector<int> levels;
  if (!c.levels_given) {
    for (int n = 1; n <= system.depth(); ++n) levels.push_back(n);
    return levels;
  }
  for (const auto& item : split(c.levels, ',')) {
    if (item.empty()) continue;
    try {
      const auto dots = item.find("..");
      if (dots == std::string::npos) {
        levels.push_back(std::stoi(item));
      } else {
        const int lo = std::stoi(item.substr(0, dots));
        const int hi = std::stoi(item.substr(dots + 2));
        for (int n = lo; n <= hi; ++n) levels.push_back(n);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("--levels: cannot parse '" + item + "'");
    }
  }
  if (levels.empty()) throw ValidationError("--levels: empty level list");
  for (int n : levels) {
    if (!system.has_level(n)) {
      throw ValidationError("--levels: level " + std::to_string(n) + " is not provided (depth " +
                            std::to_string(system.depth()) + ")");
    }
  }
  return levels;
}

fs::path prepare_out_dir(const CommonOptions& c) {
  fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  return f;
}

void write_metadata(std::ostream& out, const std::string& command, const CommonOptions& c,
                    const std::vector<std::pair<std::string, std::string>>& extra) {
  out << "# curvecode " << kVersion << '\n';
  out << "# command " << command << " system=" << c.system << " depth=" << c.depth << " function=" << c.function;
  for (const auto& [k, v] : extra) out << ' ' << k << '=' << v;
  out << '\n';
}

// Runs fn for every level with at most `jobs` threads; results come back in
// level order and the first failing level (in that order) is rethrown.
template <class T, class Fn>
std::vector<T> per_level(const std::vector<int>& levels, int jobs, Fn fn) {
  std::vector<std::optional<T>> slots(levels.size());
  std::vector<std::exception_ptr> errors(levels.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < levels.size(); i = next++) {
      try {
        slots[i].emplace(fn(levels[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), levels.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<T> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string decimal(const Rational& r) {
  std::ostringstream s;
  s << std::setprecision(12) << to_double(r);
  return s.str();
}

std::string optional_decimal(const std::optional<Rational>& r) { return r ? decimal(*r) : std::string(); }

// ---- code ------------------------------------------------------------------

struct CodeRow {
  int level;
  LevelResolutions res;
  StretchStats stats;
};

int cmd_code(const CommonOptions& c, std::ostream& out) {
  const DiscretizationSystem system = make_system(c);
  const PLFunction f = make_function(c.function);
  const auto levels = parse_levels(c, system);
  const fs::path dir = prepare_out_dir(c);

  auto rows = per_level<CodeRow>(levels, c.jobs, [&](int n) {
    const auto res = resolutions(system, n);
    const Code q = quantitative_code(f, system, n);
    const Code ql = qualitative_code(q);
    const Code s = stretched_code(q);
    const std::string suffix = "_" + std::to_string(n) + ".txt";
    auto fq = open_output(dir / ("Q" + suffix));
    write_code(fq, q);
    auto fql = open_output(dir / ("q" + suffix));
    write_code(fql, ql);
    auto fs_ = open_output(dir / ("s" + suffix));
    write_code(fs_, s);
    return CodeRow{n, res, stretch_stats(q, f, res.min_gap)};
  });

  auto csv = open_output(dir / "code_stats.csv");
  write_metadata(csv, "code", c, {});
  csv << "n,N_n,h_n,H_n,u_n,d_n,V_n,net,floor_drift,fr_1_s,u_over_V\n";
  for (const auto& r : rows) {
    csv << r.level << ',' << r.res.point_count << ',' << r.res.min_gap << ',' << r.res.max_gap << ','
        << r.stats.ups << ',' << r.stats.downs << ',' << r.stats.variation << ',' << r.stats.net << ','
        << r.stats.floor_drift << ',' << optional_decimal(r.stats.up_frequency) << ','
        << optional_decimal(r.stats.up_ratio) << '\n';
  }
  out << "coded " << rows.size() << " level(s) into " << dir.string() << '\n';
  return 0;
}

// ---- forge -----------------------------------------------------------------

struct ForgeOptions {
  std::string word;
  std::string alpha;
  std::int64_t t = 10;
  std::string eps = "1/10";
  std::string mode = "qualitative";
  int min_level = 1;
};

int cmd_forge(const CommonOptions& c, const ForgeOptions& o, std::ostream& out) {
  ForgeRequest req;
  req.w = parse_word(o.word);
  if (req.w.empty()) throw ValidationError("--word must be non-empty");
  req.target.alpha = rational_option("alpha", o.alpha);
  req.target.t = o.t;
  req.eps = rational_option("eps", o.eps);
  if (req.eps <= 0) throw ValidationError("--eps must be positive");
  if (o.t < 1) throw ValidationError("--t must be >= 1");
  const std::int64_t p = min_periodic_factor_length(req.w);
  if (req.target.alpha < 0 || req.target.alpha > Rational(1, static_cast<unsigned long>(p))) {
    throw ValidationError("--alpha must lie in [0, 1/p(w)] = [0, 1/" + std::to_string(p) + "]");
  }
  if (o.mode == "qualitative") {
    req.mode = ForgeMode::Qualitative;
    for (Symbol s : req.w) {
      if (s < -1 || s > 1) throw ValidationError("qualitative words use symbols -1, 0, 1 only");
    }
  } else if (o.mode == "quantitative") {
    req.mode = ForgeMode::Quantitative;
  } else {
    throw ValidationError("--mode must be qualitative or quantitative");
  }
  req.g = make_function(c.function);
  req.system = make_system(c);
  req.min_level = o.min_level;
  const fs::path dir = prepare_out_dir(c);

  const ForgeResult result = forge_frequency_witness(req);
  auto fw = open_output(dir / "witness.txt");
  write_pl_function(fw, result.f);
  auto fc = open_output(dir / "code.txt");
  write_code(fc, result.code);
  auto fcert = open_output(dir / "certificate.txt");
  write_certificate(fcert, result);
  auto fcov = open_output(dir / "cover.txt");
  write_cover(fcov, result.cover);
  out << "level " << result.level << " realized frequency " << result.realized_frequency << " (target "
      << req.target.alpha << " +- 1/" << req.target.t << "), sup distance " << result.certificate.sup_distance
      << '\n';
  return result.certificate.all() ? 0 : 1;
}

// ---- zigzag ----------------------------------------------------------------

struct ZigzagOptions {
  std::string eps = "1/4";
  std::optional<std::int64_t> jump;
  std::optional<int> level;
};

int cmd_zigzag(const CommonOptions& c, const ZigzagOptions& o, std::ostream& out) {
  const Rational eps = rational_option("eps", o.eps);
  if (eps <= 0) throw ValidationError("--eps must be positive");
  const DiscretizationSystem system = make_system(c);
  const PLFunction g = make_function(c.function);
  const int n = o.level.value_or(system.depth());
  if (!system.has_level(n)) throw ValidationError("--level " + std::to_string(n) + " is not provided");
  std::int64_t jump = 0;
  if (o.jump) {
    jump = *o.jump;
  } else {
    const auto best = max_zigzag_jump(eps, resolutions(system, n).min_gap);
    if (!best) throw ValidationError("level " + std::to_string(n) + " is too coarse for any jump at this eps");
    jump = *best;
  }
  const fs::path dir = prepare_out_dir(c);
  const ZigzagResult r = forge_zigzag(g, eps, jump, system, n);
  auto fw = open_output(dir / "zigzag_witness.txt");
  write_pl_function(fw, r.f);
  auto fq = open_output(dir / "zigzag_Q.txt");
  write_code(fq, r.quantitative);
  auto fql = open_output(dir / "zigzag_q.txt");
  write_code(fql, r.qualitative);
  auto fcert = open_output(dir / "zigzag_certificate.txt");
  write_zigzag_certificate(fcert, r);
  out << "level " << r.level << " jump " << r.jump << ": above " << r.certificate.above << ", below "
      << r.certificate.below << ", exceptions " << r.certificate.exceptions << ", u/V "
      << optional_decimal(r.stats.up_ratio) << '\n';
  return r.certificate.all() ? 0 : 1;
}

// ---- sturmian / sweep ------------------------------------------------------

struct SturmianOptions {
  std::string slope = "1/2";
  std::string intercept;  // default: 1/(2q) for slope p/q
};

LineSpec make_line(const SturmianOptions& o) {
  LineSpec spec;
  spec.slope = rational_option("slope", o.slope);
  if (spec.slope < 0) throw ValidationError("--slope must be non-negative");
  if (o.intercept.empty()) {
    spec.intercept = Rational(1) / (2 * Rational(spec.slope.get_den()));
  } else {
    spec.intercept = rational_option("intercept", o.intercept);
  }
  return spec;
}

void plot(const fs::path& path, const std::string& title, const std::string& y_label,
          const std::vector<PlotSeries>& series) {
  auto f = open_output(path);
  PlotOptions options;
  options.title = title;
  options.x_label = "level n";
  options.y_label = y_label;
  write_line_plot(f, series, options);
}

int run_sturmian(const CommonOptions& c, const SturmianOptions& o, const std::string& command, std::ostream& out) {
  const LineSpec spec = make_line(o);
  const DiscretizationSystem system = make_system(c);
  const auto levels = parse_levels(c, system);
  for (int n : levels) {
    if (!system.is_uniform_level(n)) throw ValidationError("sturmian runs need uniform levels");
  }
  const fs::path dir = prepare_out_dir(c);
  auto rows = per_level<ConvergenceRow>(levels, c.jobs, [&](int n) {
    return frequency_convergence(spec, system, {n}).front();
  });
  const SequenceComparison cmp = compare_with_cutting(spec, system, levels.back());

  auto csv = open_output(dir / "sturmian.csv");
  write_metadata(csv, command, c,
                 {{"slope", to_string(spec.slope)}, {"intercept", to_string(spec.intercept)},
                  {"limit", to_string(crossing_share_limit(spec.slope))}});
  write_convergence_csv(csv, rows);

  PlotSeries fr{"fr(1,s)", {}, {}}, share{"crossing ratio", {}, {}};
  for (const auto& r : rows) {
    fr.x.push_back(r.level);
    fr.y.push_back(to_double(r.up_frequency));
    if (r.crossing_ratio) {
      share.x.push_back(r.level);
      share.y.push_back(to_double(*r.crossing_ratio));
    }
  }
  plot(dir / "sturmian.svg", "line slope " + to_string(spec.slope), "frequency", {fr, share});
  out << "level " << levels.back() << ": stretched code vs cutting sequence discrepancy " << cmp.discrepancy()
      << " (mismatches " << cmp.mismatches << ", length difference " << cmp.length_difference << "); limit "
      << decimal(crossing_share_limit(spec.slope)) << '\n';
  return 0;
}

struct SweepOptions {
  std::string kind = "freq";
  std::string word;
  std::string alpha;
  std::string mode = "qualitative";
};

struct FreqRow {
  int level;
  std::int64_t point_count;
  std::int64_t occurrences;
  std::int64_t length;
  Rational frequency;
};

int run_freq_sweep(const CommonOptions& c, const SweepOptions& o, std::ostream& out) {
  const Word w = parse_word(o.word);
  if (w.empty()) throw ValidationError("--word must be non-empty");
  std::optional<Rational> alpha;
  if (!o.alpha.empty()) alpha = rational_option("alpha", o.alpha);
  if (o.mode != "qualitative" && o.mode != "quantitative") {
    throw ValidationError("--mode must be qualitative or quantitative");
  }
  const bool qualitative = o.mode == "qualitative";
  const DiscretizationSystem system = make_system(c);
  const PLFunction f = make_function(c.function);
  const auto levels = parse_levels(c, system);
  const fs::path dir = prepare_out_dir(c);

  auto rows = per_level<FreqRow>(levels, c.jobs, [&](int n) {
    Code code = quantitative_code(f, system, n);
    if (qualitative) code = qualitative_code(code);
    return FreqRow{n, system.point_count(n), occurrences(w, code.symbols),
                   static_cast<std::int64_t>(code.symbols.size()), frequency(w, code.symbols)};
  });

  std::vector<std::pair<std::string, std::string>> meta{{"word", o.word}, {"mode", o.mode}};
  if (alpha) meta.emplace_back("alpha", to_string(*alpha));
  auto csv = open_output(dir / "freq_sweep.csv");
  write_metadata(csv, "sweep", c, meta);
  csv << "n,N_n,oc,length,fr" << (alpha ? ",abs_dev" : "") << '\n';
  PlotSeries series{"fr(w, code)", {}, {}};
  std::optional<std::pair<Rational, int>> best;
  for (const auto& r : rows) {
    csv << r.level << ',' << r.point_count << ',' << r.occurrences << ',' << r.length << ',' << decimal(r.frequency);
    if (alpha) {
      const Rational dev = abs_rational(r.frequency - *alpha);
      csv << ',' << decimal(dev);
      if (!best || dev < best->first) best = std::make_pair(dev, r.level);
    }
    csv << '\n';
    series.x.push_back(r.level);
    series.y.push_back(to_double(r.frequency));
  }
  plot(dir / "freq_sweep.svg", "frequency of " + o.word, "fr", {series});
  out << "swept " << rows.size() << " level(s)";
  if (best) out << "; closest to alpha at level " << best->second << " (|fr - alpha| = " << decimal(best->first) << ')';
  out << '\n';
  return 0;
}

int exit_code_for(ForgeErrorKind kind) {
  switch (kind) {
    case ForgeErrorKind::InvalidRequest:
    case ForgeErrorKind::JumpTooLarge:
      return 2;
    case ForgeErrorKind::SystemTooShallow:
    case ForgeErrorKind::SynthesisInfeasible:
    case ForgeErrorKind::LevelTooCoarse:
      return 3;
    case ForgeErrorKind::DoesNotFit:
      return 1;
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coding discretizations of functions on [0,1]: coders, witness forges and sweeps", "curvecode"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags win");
  app.require_subcommand(1);

  CommonOptions common;
  ForgeOptions forge;
  ZigzagOptions zigzag;
  SturmianOptions sturmian;
  SweepOptions sweep;

  auto* code_cmd = app.add_subcommand("code", "write Q, q and s codes and per-level statistics");
  add_common(code_cmd, common);

  auto* forge_cmd = app.add_subcommand("forge", "build an eps-close witness realizing a word frequency");
  add_common(forge_cmd, common);
  forge_cmd->add_option("--word", forge.word, "pattern word, e.g. \"1 -1\"")->required();
  forge_cmd->add_option("--alpha", forge.alpha, "target frequency")->required();
  forge_cmd->add_option("--t", forge.t, "precision 1/t")->capture_default_str();
  forge_cmd->add_option("--eps", forge.eps, "sup-distance tolerance")->capture_default_str();
  forge_cmd->add_option("--mode", forge.mode, "qualitative | quantitative")->capture_default_str();
  forge_cmd->add_option("--min-level", forge.min_level, "first level to try")->capture_default_str();

  auto* zigzag_cmd = app.add_subcommand("zigzag", "build an eps-close witness with alternating large jumps");
  add_common(zigzag_cmd, common);
  zigzag_cmd->add_option("--eps", zigzag.eps, "sup-distance tolerance")->capture_default_str();
  zigzag_cmd->add_option("--jump", zigzag.jump, "jump threshold (default: largest admitted)");
  zigzag_cmd->add_option("--level", zigzag.level, "level (default: deepest)");

  auto* sturmian_cmd = app.add_subcommand("sturmian", "compare line codes with cutting sequences");
  add_common(sturmian_cmd, common);
  sturmian_cmd->add_option("--slope", sturmian.slope, "line slope")->capture_default_str();
  sturmian_cmd->add_option("--intercept", sturmian.intercept, "intercept in cell units (default 1/(2q))");

  auto* sweep_cmd = app.add_subcommand("sweep", "per-level frequency tables with an SVG plot");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--kind", sweep.kind, "freq | sturmian")->capture_default_str();
  sweep_cmd->add_option("--word", sweep.word, "pattern word (freq)");
  sweep_cmd->add_option("--alpha", sweep.alpha, "reference frequency (freq)");
  sweep_cmd->add_option("--mode", sweep.mode, "qualitative | quantitative (freq)")->capture_default_str();
  sweep_cmd->add_option("--slope", sturmian.slope, "line slope (sturmian)")->capture_default_str();
  sweep_cmd->add_option("--intercept", sturmian.intercept, "intercept in cell units (sturmian)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  auto* chosen = app.get_subcommands().front();
  common.levels_given = chosen->count("--levels") > 0;

  try {
    if (chosen == code_cmd) return cmd_code(common, out);
    if (chosen == forge_cmd) return cmd_forge(common, forge, out);
    if (chosen == zigzag_cmd) return cmd_zigzag(common, zigzag, out);
    if (chosen == sturmian_cmd) return run_sturmian(common, sturmian, "sturmian", out);
    if (sweep.kind == "sturmian") return run_sturmian(common, sturmian, "sweep", out);
    if (sweep.kind != "freq") throw ValidationError("--kind must be freq or sturmian");
    if (sweep.word.empty()) throw ValidationError("freq sweeps need --word");
    return run_freq_sweep(common, sweep, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ForgeError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const SynthesisInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const GridError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PLFunctionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const WordError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace curvecode
