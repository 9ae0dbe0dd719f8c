#include "curvecode/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "curvecode");
  std::ostringstream out, err;
  const int code = curvecode::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("curvecode_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows += line + "\n";
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("code writes one row per level") {
  const auto dir = scratch("code");
  const auto r = run_cli({"code", "--function", "identity", "--depth", "4", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "Q_2.txt").find("1 1 1 1") != std::string::npos);
  std::istringstream rows(data_rows(slurp(dir / "code_stats.csv")));
  int count = 0;
  for (std::string line; std::getline(rows, line);) ++count;
  CHECK(count == 5);  // header + 4 levels

  const auto c = run_cli({"code", "--function", "const:1/3", "--depth", "3", "--out-dir", dir.string()});
  CHECK(c.code == 0);
  CHECK(slurp(dir / "Q_3.txt") == "quantitative 3 8\n0 0 0 0 0 0 0 0\n");
}

TEST_CASE("validation failures exit with 2") {
  CHECK(run_cli({"code", "--function", "/nonexistent/breakpoints.txt"}).code == 2);
  CHECK(run_cli({"code", "--system", "/nonexistent/system.txt"}).code == 2);
  CHECK(run_cli({"forge", "--word", "0 1 0", "--alpha", "2/3"}).code == 2);
  CHECK(run_cli({"sweep", "--word", "1", "--levels", ""}).code == 2);
  CHECK(run_cli({"code", "--levels", "3..20"}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({}).code == 2);
}

TEST_CASE("forge writes a true certificate") {
  const auto dir = scratch("forge");
  const auto r = run_cli({"forge", "--function", "zero", "--word", "1", "--alpha", "1/2", "--t", "10", "--eps", "1/10",
                          "--depth", "12", "--out-dir", dir.string()});
  CHECK(r.code == 0);
  const auto cert = slurp(dir / "certificate.txt");
  CHECK(cert.find("sup_ok true") != std::string::npos);
  CHECK(cert.find("frequency_ok true") != std::string::npos);
  CHECK(fs::exists(dir / "witness.txt"));
  CHECK(fs::exists(dir / "code.txt"));
}

TEST_CASE("infeasible constructions exit with 3") {
  const auto r = run_cli({"forge", "--function", "zero", "--word", "1", "--alpha", "1/2", "--t", "100", "--depth", "2",
                          "--out-dir", scratch("shallow").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("(K-1)|w|/N_n") != std::string::npos);
}

TEST_CASE("zigzag command") {
  const auto dir = scratch("zigzag");
  const auto r = run_cli({"zigzag", "--function", "zero", "--eps", "1/4", "--jump", "3", "--depth", "8", "--out-dir",
                          dir.string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "zigzag_certificate.txt").find("certified true") != std::string::npos);
  CHECK(run_cli({"zigzag", "--eps", "1/4", "--jump", "500", "--depth", "8", "--out-dir", dir.string()}).code == 2);
}

TEST_CASE("sturmian sweep converges and is reproducible") {
  const auto a = scratch("sturmian_a");
  const auto b = scratch("sturmian_b");
  const auto r1 = run_cli({"sweep", "--kind", "sturmian", "--slope", "1/2", "--depth", "12", "--levels", "4..12",
                           "--out-dir", a.string(), "--jobs", "3"});
  const auto r2 = run_cli({"sturmian", "--slope", "1/2", "--depth", "12", "--levels", "4..12", "--out-dir", b.string()});
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  const auto rows = data_rows(slurp(a / "sturmian.csv"));
  CHECK(rows == data_rows(slurp(b / "sturmian.csv")));
  CHECK(rows.find("12,4097,2048,0,2048,") != std::string::npos);
  CHECK(slurp(a / "sturmian.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("frequency sweep of a forged witness") {
  const auto dir = scratch("freq");
  REQUIRE(run_cli({"forge", "--function", "zero", "--word", "1", "--alpha", "1/2", "--depth", "12", "--out-dir",
                   dir.string()})
              .code == 0);
  const auto witness = (dir / "witness.txt").string();
  const auto r = run_cli({"sweep", "--word", "1", "--alpha", "1/2", "--function", witness, "--depth", "12", "--out-dir",
                          dir.string(), "--jobs", "2"});
  CHECK(r.code == 0);
  const auto cert = slurp(dir / "certificate.txt");
  const auto level = cert.substr(6, cert.find('\n') - 6);
  CHECK(r.out.find("closest to alpha at level " + level) != std::string::npos);
  CHECK(fs::exists(dir / "freq_sweep.svg"));
}

TEST_CASE("config files supply defaults and flags win") {
  const auto dir = scratch("config");
  const auto cfg = dir / "run.toml";
  {
    std::ofstream out(cfg);
    out << "[code]\nfunction = \"const:1/3\"\ndepth = 3\nout-dir = \"" << dir.string() << "\"\n";
  }
  CHECK(run_cli({"--config", cfg.string(), "code"}).code == 0);
  CHECK(slurp(dir / "Q_3.txt") == "quantitative 3 8\n0 0 0 0 0 0 0 0\n");
  CHECK(run_cli({"--config", cfg.string(), "code", "--function", "identity"}).code == 0);
  CHECK(slurp(dir / "Q_2.txt") == "quantitative 2 4\n1 1 1 1\n");
}

}  // TEST_SUITE
