#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracgs/config.hpp"
#include "../support.hpp"

using namespace fracgs;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return RunConfig::parse(in, "test.ini");
}

ConfigError parse_error(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected ConfigError");
  return ConfigError("", "", 0, 0);
}

const std::string kExe = FRACGS_EXE;

std::string cli(const std::string& args, const fs::path& out) { return kExe + " " + args + " --out " + out.string(); }

}  // namespace

TEST_CASE("defaults and overrides") {
  RunConfig c;
  CHECK(c.command() == "solve");
  CHECK(c.is_default("grid.N"));
  CHECK(c.grid() == GridSpec(80.0, 4096));
  c.apply_override("grid.N=1024");
  CHECK_FALSE(c.is_default("grid.N"));
  CHECK(c.get_int("grid.N") == 1024);
  CHECK(c.is_auto("audit.theta"));
  CHECK_THROWS_AS(c.apply_override("grid.N"), ConfigError);
  CHECK_THROWS_AS(c.apply_override("grid.M=3"), ConfigError);
}

TEST_CASE("lists and ranges") {
  RunConfig c;
  CHECK(c.get_list("verify.separations") == std::vector<double>{10.0, 20.0, 40.0});
  c.set("moser.alphas", "0.1:0.3:0.1");
  const auto a = c.get_list("moser.alphas");
  REQUIRE(a.size() == 3);
  CHECK(a[2] == doctest::Approx(0.3));
  CHECK(c.get_list("audit.alphas").size() == 31);  // stop is inclusive
}

TEST_CASE("parse errors carry line and column") {
  SUBCASE("unknown key") {
    const ConfigError e = parse_error("[grid]\nL = 10\n  M = 3\n");
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
    CHECK(e.source() == "test.ini");
  }
  SUBCASE("unknown section") { CHECK(parse_error("# c\n\n[mesh]\n").line() == 3); }
  SUBCASE("missing equals") { CHECK(parse_error("[grid]\nL 10\n").line() == 2); }
  SUBCASE("key outside a section") { CHECK(parse_error("L = 10\n").line() == 1); }
  SUBCASE("bad value is reported where it was written") {
    RunConfig c = parse("[grid]\n\nL = ten\n");
    try {
      (void)c.grid();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() > 0);
    }
  }
}

TEST_CASE("parameters foreign to the family are rejected") {
  CHECK_THROWS_AS(parse("[nonlinearity]\nfamily = pure_power\nlambda = 3\n").nonlinearity(), ConfigError);
  CHECK_NOTHROW(parse("[nonlinearity]\nfamily = paper_critical\nlambda = 3\n").nonlinearity());
  CHECK_THROWS_AS(parse("[nonlinearity]\nfamily = paper_critical\nq = 2\n").nonlinearity(), ConfigError);
}

TEST_CASE("echo round-trips") {
  RunConfig c = parse("[nonlinearity]\nfamily = exp_power\nnu = 1.5\n");
  const RunConfig d = parse(c.echo());
  for (const auto& k : RunConfig::known_keys()) CHECK(c.get(k) == d.get(k));
}

TEST_CASE("solve config mapping") {
  const SolveConfig s = parse("[solver]\nmax_iters = 7\nrecenter_every = 0\n[grid]\nboundary = periodic\n").solve_config();
  CHECK(s.max_iters == 7);
  CHECK(s.recenter_every == 0);
  CHECK(s.grid.boundary() == Boundary::periodic);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = testutil::scratch_dir("cli");

  CHECK(testutil::run(cli("solve", dir / "ok")) == 0);
  CHECK(fs::exists(dir / "ok" / "field.csv"));
  CHECK(fs::exists(dir / "ok" / "report.txt"));

  CHECK(testutil::run(cli("solve -s solver.max_iters=1", dir / "cap")) == 2);
  CHECK(fs::exists(dir / "cap" / "trace.csv"));
  CHECK(testutil::slurp(dir / "cap" / "summary.txt").find("termination=max_iters") != std::string::npos);

  CHECK(testutil::run(cli("solve -s nonlinearity.family=paper_critical -s solver.init_amplitude=1e6", dir / "ovf")) ==
        3);
  CHECK(testutil::slurp(dir / "ovf" / "summary.txt").find("termination=overflow") != std::string::npos);

  {
    std::ofstream bad(dir / "bad.ini");
    bad << "[grid]\nL = 80\nwidth = 3\n";
  }
  CHECK(testutil::run(cli("solve -c " + (dir / "bad.ini").string(), dir / "bad")) == 1);
  CHECK(testutil::run(cli("solve -s grid.N=abc", dir / "bad2")) == 1);
  CHECK(testutil::run(kExe + " frobnicate") == 1);

  CHECK(testutil::run(cli("audit -s nonlinearity.family=paper_critical", dir / "audit")) == 0);
  CHECK(testutil::run(cli("audit -s nonlinearity.family=paper_critical -s nonlinearity.lambda=0 -s audit.C_q=10",
                          dir / "audit0")) == 4);
  CHECK(testutil::run(cli("moser", dir / "moser")) == 0);
  CHECK(testutil::run(cli("verify", dir / "verify")) == 0);
  CHECK(testutil::run(cli("oracle", dir / "oracle")) == 0);
}

TEST_CASE("oracle tolerance ladder") {
  const fs::path dir = testutil::scratch_dir("oracle");
  CHECK(testutil::run(cli("oracle -s grid.N=64", dir / "coarse")) == 4);
  const std::string coarse = testutil::slurp(dir / "coarse" / "report.txt");
  CHECK(coarse.find("FAIL residual") != std::string::npos);

  CHECK(testutil::run(cli("oracle -s grid.L=10", dir / "short")) == 4);
  const std::string shortbox = testutil::slurp(dir / "short" / "report.txt");
  CHECK(shortbox.find("FAIL J ") != std::string::npos);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = testutil::scratch_dir("rerun");
  const std::string args = "solve -s nonlinearity.family=paper_critical -s solver.perturbation=0.1 -s run.seed=3";
  REQUIRE(testutil::run(cli(args, dir / "a")) == 0);
  REQUIRE(testutil::run(cli(args, dir / "b")) == 0);
  for (const char* f : {"trace.csv", "field.csv", "summary.txt"})
    CHECK(testutil::slurp(dir / "a" / f) == testutil::slurp(dir / "b" / f));
}
