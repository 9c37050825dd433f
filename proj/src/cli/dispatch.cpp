#include "femf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "femf/energy.hpp"

namespace femf::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

VerificationReport threshold_report(std::string check, std::string quantity, int n,
                                    double value, double tolerance) {
  VerificationReport r;
  r.check = std::move(check);
  r.resolutions = {n};
  r.tolerance = tolerance;
  r.measurements.push_back({std::move(quantity), n, value, value});
  r.pass = value <= tolerance;
  r.verdict = r.pass ? "pass"
                     : fmt::format("fail: {:.3e} above {:.1e}", value, tolerance);
  return r;
}

CsvTable convergence_table(const std::vector<int> &res, const std::vector<double> &err) {
  CsvTable t{{"n", "error", "order"}, {}};
  for (std::size_t i = 0; i < res.size(); ++i)
    t.rows.push_back({static_cast<double>(res[i]), err[i],
                      i ? observed_order(err[i - 1], err[i],
                                         static_cast<double>(res[i]) / res[i - 1])
                        : kNaN});
  return t;
}

std::vector<int> resolutions_or(const RunConfig &rc, std::vector<int> fallback) {
  if (!rc.resolutions.empty())
    return rc.resolutions;
  if (rc.resolution > 0 && fallback.size() == 1)
    return {rc.resolution};
  return fallback;
}

// Reports of one Maxwell run, by scenario.
void maxwell_reports(const RunConfig &rc, const SimConfig &cfg, const Trajectory &tr,
                     RunOutputs &out) {
  const int n = cfg.n[0];
  if (const auto o = oracle(rc)) {
    out.reports.push_back(
        threshold_report("oracle_" + o->name, "relative_l2", n, o->error(tr), o->tolerance));
  } else if (rc.scenario == "driven_cavity") {
    const EnergyBalance eb = energy_balance(tr.rows, tr.grid, cfg.material.c);
    out.reports.push_back(threshold_report("energy_closure", "max_closure", n, eb.max_closure, 1e-2));
  } else if (rc.scenario == "lossless_cavity") {
    const double w0 = tr.rows.empty() ? 0.0 : tr.rows.front().energy;
    double drift = 0.0, surface = 0.0;
    for (const auto &r : tr.rows) {
      drift = std::max(drift, std::abs(r.energy - w0));
      surface = std::max(surface, std::abs(r.surface));
    }
    out.reports.push_back(
        threshold_report("energy_drift", "relative_drift", n, w0 > 0 ? drift / w0 : drift, 1e-3));
    out.reports.push_back(threshold_report("surface_term", "max_abs", n, surface, 1e-12));
  } else if (rc.scenario == "charge_ramp") {
    out.reports.push_back(check_charge_conservation(tr, cfg));
  } else if (rc.scenario == "constraint") {
    double div_b = 0.0, div_e = 0.0;
    for (const auto &r : tr.rows) {
      div_b = std::max(div_b, r.div_b);
      div_e = std::max(div_e, r.div_e);
    }
    out.reports.push_back(threshold_report("magnetic_gauss", "max_div_b", n, div_b, 1e-12));
    out.reports.push_back(threshold_report("electric_gauss", "max_div_e", n, div_e, 1e-12));
  }
}

void verify_identities(const RunConfig &rc, RunOutputs &out) {
  const SimConfig cfg = simulation(rc);
  IdentityOptions o;
  o.dims = cfg.dims;
  o.L = cfg.L;
  o.fields = rc.fields;
  o.seed = rc.seed;
  o.resolutions = resolutions_or(rc, {16, 32, 64});
  out.reports.push_back(check_identities(o));
}

void verify_theorems(const RunConfig &rc, RunOutputs &out) {
  const SimConfig cfg = simulation(rc);
  const AnalyticField f = trial_family(rc.seed, 1).front().vector;
  FractalDims stokes_dims = cfg.dims, gauss_dims = cfg.dims;
  if (!rc.alpha)
    gauss_dims.alpha = {0.5, 1.0, 1.0};
  const Rect patch{0.3, {0.1, 0.2}, {0.7, 0.75}};
  out.reports.push_back(
      check_stokes(f, 2, patch, stokes_dims, resolutions_or(rc, {64, 128, 256})));
  const Box box{{0.1, 0.1, 0.1}, {0.7, 0.7, 0.7}};
  out.reports.push_back(check_green_gauss(f, box, gauss_dims, resolutions_or(rc, {32, 64, 128})));

  const std::vector<int> res{64, 128, 256};
  std::vector<double> residual;
  for (int n : res) {
    const SimConfig c = charge_ramp(n);
    residual.push_back(check_charge_conservation(run_maxwell(c), c).measurements.front().relative);
  }
  out.reports.push_back(convergence_report("charge_conservation", "relative_residual", res,
                                           residual, 1e-2, 1.9));
  out.tables.emplace_back("charge_convergence.csv", convergence_table(res, residual));
}

void verify_variational(const RunConfig &rc, RunOutputs &out) {
  const SimConfig cfg = simulation(rc);
  VariationalSuiteOptions o;
  if (rc.alpha)
    o.dims.alpha = *rc.alpha;
  if (rc.l)
    o.dims.l = *rc.l;
  if (rc.l0)
    o.dims.l0 = *rc.l0;
  o.L = cfg.L;
  if (rc.resolution > 0)
    o.n = rc.resolution;
  out.reports.push_back(check_variational_suite(o));
}

void run_maxwell_cmd(const RunConfig &rc, RunOutputs &out) {
  const SimConfig cfg = simulation(rc);
  Trajectory tr = run_maxwell(cfg);
  out.grid = tr.grid;
  out.tables.emplace_back("diagnostics.csv", diagnostics_table(tr.rows));
  maxwell_reports(rc, cfg, tr, out);
  out.frames = std::move(tr.frames);
}

void run_conductor_cmd(const RunConfig &rc, RunOutputs &out) {
  const SimConfig cfg = simulation(rc);
  Trajectory tr = run_conductor(cfg);
  out.grid = tr.grid;
  out.tables.emplace_back("diagnostics.csv", diagnostics_table(tr.rows));
  if (const auto o = oracle(rc))
    out.reports.push_back(threshold_report("oracle_" + o->name, "relative_l2", cfg.n[0],
                                           o->error(tr), o->tolerance));
  out.frames = std::move(tr.frames);
}

void run_dielectric_cmd(const RunConfig &rc, RunOutputs &out) {
  const auto res = resolutions_or(rc, {128, 256, 512});
  std::vector<double> errors;
  double tolerance = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const SimConfig cfg = simulation(rc, res[i]);
    Trajectory tr = run_dielectric(cfg);
    const auto o = oracle(rc, res[i]);
    errors.push_back(o->error(tr));
    tolerance = o->tolerance;
    if (i + 1 == res.size()) {
      out.grid = tr.grid;
      out.tables.emplace_back("diagnostics.csv", diagnostics_table(tr.rows));
      out.frames = std::move(tr.frames);
    }
  }
  out.tables.emplace_back("convergence.csv", convergence_table(res, errors));
  VerificationReport r =
      convergence_report("dielectric_convergence", "relative_l2", res, errors, tolerance, 1.8);
  if (r.pass && res.size() > 1 && r.observed_order > 2.2) {
    r.pass = false;
    r.verdict = fmt::format("fail: order {:.3f} above 2.2", r.observed_order);
  }
  r.notes.push_back("order band 2.0 +- 0.2");
  out.reports.push_back(std::move(r));
}

void energy_audit(const RunConfig &rc, RunOutputs &out) {
  const bool driven = rc.scenario == "driven_cavity";
  const auto res = resolutions_or(rc, driven ? std::vector<int>{16, 32} : std::vector<int>{16});
  std::vector<double> closures;
  for (int n : res) {
    const SimConfig cfg = simulation(rc, n);
    const Trajectory tr = run_maxwell(cfg);
    const EnergyBalance eb = energy_balance(tr.rows, tr.grid, cfg.material.c);
    out.tables.emplace_back(fmt::format("energy_n{}.csv", n), energy_table(eb.rows));
    closures.push_back(eb.max_closure);
    if (!driven) {
      RunOutputs one;
      maxwell_reports(rc, cfg, tr, one);
      for (auto &r : one.reports) {
        r.check += fmt::format("_n{}", n);
        out.reports.push_back(std::move(r));
      }
    }
  }
  if (driven) {
    VerificationReport r;
    r.check = "energy_closure";
    r.resolutions = res;
    r.tolerance = 1e-2;
    bool decreasing = true;
    for (std::size_t i = 0; i < res.size(); ++i) {
      r.measurements.push_back({"max_closure", res[i], closures[i], closures[i]});
      if (i && !(closures[i] < closures[i - 1]))
        decreasing = false;
    }
    const auto orders = observed_orders(closures);
    if (!orders.empty())
      r.observed_order = orders.back();
    r.pass = closures.back() <= r.tolerance && decreasing;
    r.verdict = r.pass ? "pass"
                       : fmt::format("fail: closure {:.3e}{}", closures.back(),
                                     decreasing ? "" : ", not decreasing under refinement");
    r.notes.push_back("closure = |surface + joule + rate| x crossing time / max energy");
    out.reports.push_back(std::move(r));
  }
}

} // namespace

int dispatch(const RunConfig &rc, RunOutputs &out) {
  out.subcommand = rc.subcommand;
  out.config = resolved_config(rc);
  const std::string &s = rc.subcommand;
  if (s == "verify-identities")
    verify_identities(rc, out);
  else if (s == "verify-theorems")
    verify_theorems(rc, out);
  else if (s == "verify-variational")
    verify_variational(rc, out);
  else if (s == "run-maxwell")
    run_maxwell_cmd(rc, out);
  else if (s == "run-conductor")
    run_conductor_cmd(rc, out);
  else if (s == "run-dielectric")
    run_dielectric_cmd(rc, out);
  else if (s == "energy-audit")
    energy_audit(rc, out);
  else
    throw ConfigError(fmt::format("unknown subcommand '{}'", s));
  out.status = kPass;
  for (const auto &r : out.reports)
    if (!r.pass)
      out.status = kCheckFailed;
  return out.status;
}

int run(int argc, char **argv) {
  CLI::App app{"Fractal-medium electromagnetics: operator checks and solvers"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override one key, section.key=value (repeatable)");
  app.add_option("--out", out_dir, "output directory (overrides FEMF_OUT and [output] dir)");
  app.add_option("--seed", seed, "random seed (overrides [run] seed)");
  const std::pair<const char *, const char *> subs[] = {
      {"verify-identities", "div curl, curl grad and the curl-curl decomposition"},
      {"verify-theorems", "Stokes, Green-Gauss and charge conservation"},
      {"verify-variational", "Faraday and Gauss residuals of the potential fields"},
      {"run-maxwell", "leapfrog Maxwell run (SI-normalized units)"},
      {"run-conductor", "parabolic conductor equation (Gaussian units)"},
      {"run-dielectric", "hyperbolic dielectric equation with convergence table"},
      {"energy-audit", "surface, Joule and energy-rate balance of a cavity run"}};
  for (const auto &[name, help] : subs)
    app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    std::cout << app.help();
    return kPass;
  } catch (const CLI::ParseError &e) {
    std::string what = e.what();
    for (int i = 1; i < argc; ++i) {
      const std::string a = argv[i];
      if (a == "--config" || a == "--set" || a == "--out" || a == "--seed") {
        ++i;
      } else if (!a.empty() && a[0] != '-') {
        if (std::find(kSubcommands.begin(), kSubcommands.end(), a) == kSubcommands.end())
          what = fmt::format("unknown subcommand '{}'", a);
        break;
      }
    }
    std::cerr << "error: " << what << "\n\n" << app.help();
    return kUsage;
  }
  const std::string subcommand = app.get_subcommands().front()->get_name();

  RunConfig rc;
  try {
    IniDocument doc = config_path.empty() ? IniDocument{} : parse_ini_file(config_path);
    for (const auto &s : sets)
      apply_override(doc, s);
    if (seed)
      apply_override(doc, fmt::format("run.seed={}", *seed));
    rc = parse_config(doc, subcommand);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  }
  if (const char *env = std::getenv("FEMF_OUT"); env && *env)
    rc.out_dir = env;
  if (!out_dir.empty())
    rc.out_dir = out_dir;

  RunOutputs out;
  int status = kPass;
  try {
    status = dispatch(rc, out);
  } catch (const SolverAbort &e) {
    std::cerr << "abort: " << e.what() << '\n';
    out.status = status = kAbort;
    out.frames = {e.frame};
    if (!out.grid)
      out.grid = simulation(rc).build_grid();
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAbort;
  }
  try {
    for (const auto &r : out.reports)
      std::cout << r.table() << '\n';
    const auto manifest = write_outputs(out, rc.out_dir);
    std::cout << "manifest: " << manifest.string() << '\n';
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAbort;
  }
  for (const auto &r : out.reports)
    if (!r.pass) {
      std::cerr << "FAIL " << r.check << ": " << r.verdict << '\n';
      break;
    }
  return status;
}

} // namespace femf::cli
