#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "femf/cli.hpp"

using namespace femf;
using namespace femf::cli;
namespace fs = std::filesystem;

namespace {

IniDocument ini(const std::string &text) {
  std::istringstream in(text);
  return parse_ini(in, "cfg.ini");
}

std::string config_error(const std::string &text, const std::string &sub = "run-maxwell") {
  try {
    (void)parse_config(ini(text), sub);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return {};
}

std::string ini_error(const std::string &text) {
  try {
    (void)ini(text);
  } catch (const ConfigError &e) {
    return e.what();
  }
  return {};
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "femf");
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("femf_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json manifest(const fs::path &dir) { return nlohmann::json::parse(slurp(dir / "manifest.json")); }

} // namespace

TEST_CASE("ini parsing") {
  const IniDocument doc = ini("# header\n[fractal]\nalpha = 0.9, 0.6, 0.8 ; inline\n\n[grid]\n  n=16\n");
  REQUIRE(doc.size() == 2);
  CHECK(doc.at("fractal.alpha").value == "0.9, 0.6, 0.8");
  CHECK(doc.at("fractal.alpha").origin == "cfg.ini:3");
  CHECK(doc.at("grid.n").value == "16");
}

TEST_CASE("ini errors carry file and line") {
  CHECK(ini_error("[grid]\nn = 8\nbogus = 1\n").starts_with("cfg.ini:3: unknown key 'bogus'"));
  CHECK(ini_error("[grid]\nn = 8\nn = 16\n").find("cfg.ini:3: duplicate key grid.n") == 0);
  CHECK(ini_error("[grid]\nn 8\n").starts_with("cfg.ini:2: expected 'key = value'"));
  CHECK(ini_error("n = 8\n").starts_with("cfg.ini:1: key outside any section"));
  CHECK(ini_error("[nope]\n").starts_with("cfg.ini:1: unknown section [nope]"));
  CHECK(ini_error("[grid\n").starts_with("cfg.ini:1: unterminated"));
}

TEST_CASE("overrides") {
  IniDocument doc = ini("[grid]\nn = 8\n");
  apply_override(doc, "grid.n=12");
  apply_override(doc, "solver.cfl = 0.5");
  CHECK(doc.at("grid.n").value == "12");
  CHECK(doc.at("grid.n").origin.starts_with("--set"));
  CHECK(doc.at("solver.cfl").value == "0.5");
  CHECK_THROWS_AS(apply_override(doc, "grid.bogus=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "nodot=1"), ConfigError);
}

TEST_CASE("value validation") {
  const std::string alpha = config_error("[fractal]\nalpha = 0.9, 1.2, 0.8\n");
  CHECK(alpha.find("cfg.ini:2") != std::string::npos);
  CHECK(alpha.find("fractal.alpha") != std::string::npos);
  CHECK(alpha.find("(0,1]") != std::string::npos);

  const std::string box = config_error("[fractal]\nalpha = 0.5\nl = 1\n[grid]\nL = 0.99\n");
  CHECK(box.find("cfg.ini:5") != std::string::npos);
  CHECK(box.find("grid.L") != std::string::npos);
  CHECK(box.find("singular") != std::string::npos);

  CHECK(config_error("[solver]\ncfl = 1.5\n").find("solver.cfl") != std::string::npos);
  CHECK(config_error("[grid]\nn = 2\n").find("grid.n") != std::string::npos);
  CHECK(config_error("[material]\nunits = cgs\n").find("material.units") != std::string::npos);
  CHECK(config_error("[run]\nscenario = nope\n").find("unknown scenario") != std::string::npos);
  CHECK(config_error("[grid]\nn = x\n").find("not an integer") != std::string::npos);
  CHECK(config_error("[fractal]\nalpha = 0.9, 0.6, 0.8\n[solver]\nboundary = periodic\n")
            .find("solver.boundary") != std::string::npos);
  CHECK(config_error("[material]\nunits = gaussian\n").find("si units") != std::string::npos);
}

TEST_CASE("minimal config resolves every setting") {
  const RunConfig rc = parse_config(ini("[fractal]\nalpha = 0.9, 0.6, 0.8\n"), "run-maxwell");
  CHECK(rc.scenario == "driven_cavity");
  const auto resolved = resolved_config(rc);
  std::map<std::string, std::string> m(resolved.begin(), resolved.end());
  for (const char *key : {"fractal.alpha", "fractal.l", "fractal.l0", "grid.n", "grid.L",
                          "grid.margin", "material.units", "material.eps0", "material.mu0",
                          "material.c", "material.sigma", "material.kappa", "solver.cfl",
                          "solver.dt", "solver.steps", "solver.boundary",
                          "solver.gaussian_poynting", "output.dir", "output.cadence",
                          "run.scenario", "run.seed", "run.resolutions", "run.fields"})
    CHECK_MESSAGE(m.count(key) == 1, key);
  CHECK(m["solver.boundary"] == "pec, pec, pec");
  CHECK(m["grid.n"] == "32, 32, 32");
  CHECK(m["run.resolutions"] == "subcommand default");
  CHECK(scenarios_for("run-conductor").front() == "heat_kernel");
  CHECK(scenarios_for("verify-identities").empty());
}

TEST_CASE("sha256") {
  const fs::path dir = scratch("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc") << "abc";
  CHECK(sha256_hex(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("outputs without frames") {
  const fs::path dir = scratch("reports");
  RunOutputs out;
  out.subcommand = "verify-identities";
  VerificationReport r;
  r.check = "demo";
  r.pass = true;
  r.measurements.push_back({"gap", 8, 1e-3, 1e-4});
  out.reports.push_back(r);
  out.tables.emplace_back("t.csv", CsvTable{{"a", "b"}, {{1.0, 0.1}}});
  const fs::path path = write_outputs(out, dir);
  CHECK(path == dir / "manifest.json");
  CHECK(slurp(dir / "t.csv") == "a,b\n1,0.10000000000000001\n");
  const auto m = manifest(dir);
  CHECK(m["subcommand"] == "verify-identities");
  REQUIRE(m["files"].size() == 2);
  for (const auto &f : m["files"])
    CHECK(f["sha256"] == sha256_hex(dir / f["path"].get<std::string>()));
  CHECK(m["reports"][0]["check"] == "demo");

  out.frames.resize(1);
  CHECK_THROWS_AS(write_outputs(out, dir), std::logic_error);
}

TEST_CASE("command line") {
  SUBCASE("usage errors") {
    CHECK(run_cli({"bogus"}) == kUsage);
    CHECK(run_cli({}) == kUsage);
    CHECK(run_cli({"run-maxwell", "--set", "fractal.alpha=1.5"}) == kUsage);
    CHECK(run_cli({"run-maxwell", "--config", "/nonexistent.ini"}) == kUsage);
  }
  SUBCASE("verify-identities writes a manifest") {
    const fs::path dir = scratch("identities");
    CHECK(run_cli({"verify-identities", "--set", "run.resolutions=8, 16", "--set", "run.fields=2",
                   "--out", dir.string()}) == kPass);
    const auto m = manifest(dir);
    CHECK(m["status"] == 0);
    CHECK(m["config"]["run.fields"] == "2");
    CHECK(fs::exists(dir / "report_identities.txt"));
  }
  SUBCASE("snapshots follow the cadence") {
    const fs::path dir = scratch("frames");
    CHECK(run_cli({"run-maxwell", "--set", "run.scenario=lossless_cavity", "--set", "grid.n=8",
                   "--set", "solver.steps=10", "--set", "output.cadence=5", "--out",
                   dir.string()}) == kPass);
    const auto m = manifest(dir);
    std::vector<std::string> frames;
    for (const auto &f : m["files"])
      if (f["path"].get<std::string>().ends_with(".femf"))
        frames.push_back(f["path"].get<std::string>());
    REQUIRE(frames == std::vector<std::string>{"frame_00000005.femf", "frame_00000010.femf"});
    std::ifstream in(dir / frames[1], std::ios::binary);
    std::array<int, 3> cells{};
    const FieldArray e = read_snapshot(in, cells);
    CHECK(cells == std::array<int, 3>{8, 8, 8});
    CHECK(e.location() == Location::Edge);
  }
  SUBCASE("reruns are byte identical") {
    const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    for (const auto &dir : {a, b})
      CHECK(run_cli({"run-maxwell", "--set", "grid.n=8", "--set", "solver.steps=30", "--out",
                     dir.string()}) != kUsage);
    CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
    CHECK(!slurp(a / "diagnostics.csv").empty());
  }
  SUBCASE("output directory precedence") {
    const fs::path env = scratch("env"), flag = scratch("flag");
    ::setenv("FEMF_OUT", env.string().c_str(), 1);
    CHECK(run_cli({"run-maxwell", "--set", "run.scenario=lossless_cavity", "--set",
                   "solver.steps=3", "--set", "output.dir=/nonexistent/ignored"}) == kPass);
    CHECK(fs::exists(env / "manifest.json"));
    CHECK(run_cli({"run-maxwell", "--set", "run.scenario=lossless_cavity", "--set",
                   "solver.steps=3", "--out", flag.string()}) == kPass);
    CHECK(fs::exists(flag / "manifest.json"));
    ::unsetenv("FEMF_OUT");
  }
  SUBCASE("failed checks exit with 1") {
    const fs::path dir = scratch("variational");
    CHECK(run_cli({"verify-variational", "--set", "grid.n=8", "--out", dir.string()}) ==
          kCheckFailed);
    CHECK(manifest(dir)["status"] == 1);
  }
}
