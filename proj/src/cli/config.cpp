#include "femf/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include <fmt/format.h>

namespace femf::cli {

namespace {

const std::map<std::string, std::set<std::string>> kKeys{
    {"fractal", {"alpha", "l", "l0"}},
    {"grid", {"n", "L", "margin"}},
    {"material", {"units", "eps0", "mu0", "c", "sigma", "kappa"}},
    {"solver", {"cfl", "dt", "steps", "boundary", "gaussian_poynting"}},
    {"output", {"dir", "cadence"}},
    {"run", {"scenario", "seed", "resolutions", "fields"}},
};

const std::map<std::string, int> kDefaultResolution{
    {"plane_wave", 64},     {"maxwell_pulse", 256},   {"driven_cavity", 32},
    {"lossless_cavity", 16}, {"charge_ramp", 128},    {"constraint", 32},
    {"heat_kernel", 256},   {"heat_mode", 128},      {"dielectric_pulse", 512},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::vector<std::string> split_list(const std::string &v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty())
        out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty())
    out.push_back(cur);
  return out;
}

// Error for one key, prefixed with its origin.
[[noreturn]] void fail(const std::string &key, const IniEntry &e, const std::string &what) {
  throw ConfigError(fmt::format("{}: {}: {}", e.origin, key, what));
}

double to_double(const std::string &key, const IniEntry &e, const std::string &tok) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || !std::isfinite(v))
    fail(key, e, fmt::format("'{}' is not a number", tok));
  return v;
}

long to_long(const std::string &key, const IniEntry &e, const std::string &tok) {
  long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(key, e, fmt::format("'{}' is not an integer", tok));
  return v;
}

std::vector<double> numbers(const std::string &key, const IniEntry &e) {
  std::vector<double> out;
  for (const auto &t : split_list(e.value))
    out.push_back(to_double(key, e, t));
  if (out.empty())
    fail(key, e, "empty value");
  return out;
}

Vec3 vec3(const std::string &key, const IniEntry &e) {
  const auto v = numbers(key, e);
  if (v.size() == 1)
    return {v[0], v[0], v[0]};
  if (v.size() != 3)
    fail(key, e, fmt::format("expected 1 or 3 numbers, got {}", v.size()));
  return {v[0], v[1], v[2]};
}

Vec3 positive_vec3(const std::string &key, const IniEntry &e) {
  const Vec3 v = vec3(key, e);
  for (double x : v)
    if (!(x > 0.0))
      fail(key, e, fmt::format("{} must be positive", x));
  return v;
}

double positive(const std::string &key, const IniEntry &e) {
  const auto v = numbers(key, e);
  if (v.size() != 1)
    fail(key, e, "expected one number");
  if (!(v[0] > 0.0))
    fail(key, e, fmt::format("{} must be positive", v[0]));
  return v[0];
}

Eigen::Matrix3d tensor(const std::string &key, const IniEntry &e) {
  const auto v = numbers(key, e);
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  if (v.size() == 1) {
    m.diagonal().setConstant(v[0]);
  } else if (v.size() == 3) {
    m.diagonal() << v[0], v[1], v[2];
  } else if (v.size() == 9) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        m(r, c) = v[static_cast<std::size_t>(3 * r + c)];
  } else {
    fail(key, e, fmt::format("expected 1, 3 or 9 numbers, got {}", v.size()));
  }
  if (!m.isApprox(m.transpose(), 0.0))
    fail(key, e, "tensor must be symmetric");
  if (!(min_eigenvalue(m) > 0.0))
    fail(key, e, "tensor must be positive definite");
  return m;
}

bool boolean(const std::string &key, const IniEntry &e) {
  const std::string v = lower(trim(e.value));
  if (v == "true" || v == "yes" || v == "1" || v == "on")
    return true;
  if (v == "false" || v == "no" || v == "0" || v == "off")
    return false;
  fail(key, e, fmt::format("'{}' is not a boolean", e.value));
}

std::string join(const std::vector<std::string> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + v[i];
  return s;
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }

std::string vec_str(const Vec3 &v) {
  return fmt::format("{:.17g}, {:.17g}, {:.17g}", v[0], v[1], v[2]);
}

std::string tensor_str(const Eigen::Matrix3d &m) {
  std::string s;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      s += (r || c ? ", " : "") + g17(m(r, c));
  return s;
}

bool is_run(const std::string &sub) { return sub.rfind("run-", 0) == 0 || sub == "energy-audit"; }

// Which key a validation message from the library refers to.
std::string key_for(const std::string &msg) {
  const std::pair<const char *, const char *> table[] = {
      {"periodic", "solver.boundary"}, {"alpha", "fractal.alpha"}, {"l0[", "fractal.l0"},
      {"l[", "fractal.l"},
      {"L[", "grid.L"},           {"margin", "grid.margin"}, {"grid needs", "grid.n"},
      {"CFL", "solver.cfl"},      {"dt =", "solver.dt"},   {"steps", "solver.steps"},
      {"cadence", "output.cadence"},
      {"c^2 eps0 mu0", "material.c"}, {"eps0", "material.eps0"}, {"mu0", "material.mu0"},
      {"conductivity", "material.sigma"}, {"dielectric tensor", "material.kappa"}};
  for (const auto &[needle, key] : table)
    if (msg.find(needle) != std::string::npos)
      return key;
  return {};
}

} // namespace

IniDocument parse_ini(std::istream &in, const std::string &source) {
  IniDocument doc;
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = fmt::format("{}:{}", source, number);
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';')
      continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(fmt::format("{}: unterminated section header '{}'", where, t));
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!kKeys.count(section))
        throw ConfigError(fmt::format("{}: unknown section [{}]", where, section));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(fmt::format("{}: expected 'key = value', got '{}'", where, t));
    if (section.empty())
      throw ConfigError(fmt::format("{}: key outside any section", where));
    const std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (const auto hash = value.find_first_of("#;"); hash != std::string::npos)
      value = trim(std::string_view(value).substr(0, hash));
    if (!kKeys.at(section).count(key))
      throw ConfigError(fmt::format("{}: unknown key '{}' in [{}] (known: {})", where, key,
                                    section,
                                    join({kKeys.at(section).begin(), kKeys.at(section).end()})));
    const std::string full = section + "." + key;
    if (doc.count(full))
      throw ConfigError(fmt::format("{}: duplicate key {} (first set at {})", where, full,
                                    doc.at(full).origin));
    doc[full] = IniEntry{value, where};
  }
  return doc;
}

IniDocument parse_ini_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(fmt::format("cannot open config file {}", path.string()));
  return parse_ini(in, path.string());
}

void apply_override(IniDocument &doc, const std::string &assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError(
        fmt::format("--set {}: expected section.key=value", assignment));
  const std::string section = trim(std::string_view(assignment).substr(0, dot));
  const std::string key = trim(std::string_view(assignment).substr(dot + 1, eq - dot - 1));
  if (!kKeys.count(section) || !kKeys.at(section).count(key))
    throw ConfigError(fmt::format("--set {}: unknown key {}.{}", assignment, section, key));
  doc[section + "." + key] =
      IniEntry{trim(std::string_view(assignment).substr(eq + 1)), "--set " + assignment};
}

std::vector<std::string> scenarios_for(const std::string &subcommand) {
  if (subcommand == "run-maxwell")
    return {"driven_cavity", "plane_wave", "maxwell_pulse", "lossless_cavity", "charge_ramp",
            "constraint"};
  if (subcommand == "run-conductor")
    return {"heat_kernel", "heat_mode"};
  if (subcommand == "run-dielectric")
    return {"dielectric_pulse"};
  if (subcommand == "energy-audit")
    return {"driven_cavity", "lossless_cavity"};
  return {};
}

RunConfig parse_config(const IniDocument &doc, const std::string &subcommand) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
    throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));
  RunConfig rc;
  rc.subcommand = subcommand;
  for (const auto &[key, e] : doc)
    rc.origins[key] = e.origin;
  auto get = [&](const char *key) -> const IniEntry * {
    const auto it = doc.find(key);
    return it == doc.end() ? nullptr : &it->second;
  };

  const auto allowed = scenarios_for(subcommand);
  if (const auto *e = get("run.scenario")) {
    if (allowed.empty())
      fail("run.scenario", *e, fmt::format("{} takes no scenario", subcommand));
    if (std::find(allowed.begin(), allowed.end(), e->value) == allowed.end())
      fail("run.scenario", *e,
           fmt::format("unknown scenario '{}' for {} (choose from: {})", e->value, subcommand,
                       join(allowed)));
    rc.scenario = e->value;
  } else if (!allowed.empty()) {
    rc.scenario = allowed.front();
  }

  if (const auto *e = get("fractal.alpha")) {
    rc.alpha = vec3("fractal.alpha", *e);
    for (int k = 0; k < 3; ++k)
      if (!((*rc.alpha)[k] > 0.0 && (*rc.alpha)[k] <= 1.0))
        fail("fractal.alpha", *e,
             fmt::format("alpha must lie in (0,1]: alpha[{}] = {}", k, (*rc.alpha)[k]));
  }
  if (const auto *e = get("fractal.l"))
    rc.l = positive_vec3("fractal.l", *e);
  if (const auto *e = get("fractal.l0"))
    rc.l0 = positive_vec3("fractal.l0", *e);
  if (const auto *e = get("grid.L"))
    rc.L = positive_vec3("grid.L", *e);
  if (const auto *e = get("grid.margin"))
    rc.margin = positive_vec3("grid.margin", *e);
  if (const auto *e = get("grid.n")) {
    std::vector<long> v;
    for (const auto &t : split_list(e->value))
      v.push_back(to_long("grid.n", *e, t));
    if (v.size() != 1 && v.size() != 3)
      fail("grid.n", *e, fmt::format("expected 1 or 3 integers, got {}", v.size()));
    for (long x : v)
      if (x < 4 || x > 4096)
        fail("grid.n", *e, fmt::format("cell count {} outside [4, 4096]", x));
    rc.resolution = static_cast<int>(v[0]);
    if (v.size() == 3)
      rc.cells = std::array<int, 3>{static_cast<int>(v[0]), static_cast<int>(v[1]),
                                    static_cast<int>(v[2])};
  }

  if (const auto *e = get("material.units")) {
    const std::string u = lower(e->value);
    if (u == "si")
      rc.units = Units::SiNormalized;
    else if (u == "gaussian")
      rc.units = Units::Gaussian;
    else
      fail("material.units", *e, fmt::format("'{}' is not one of: si, gaussian", e->value));
  }
  if (const auto *e = get("material.eps0"))
    rc.eps0 = positive("material.eps0", *e);
  if (const auto *e = get("material.mu0"))
    rc.mu0 = positive("material.mu0", *e);
  if (const auto *e = get("material.c"))
    rc.c = positive("material.c", *e);
  if (const auto *e = get("material.sigma"))
    rc.sigma = tensor("material.sigma", *e);
  if (const auto *e = get("material.kappa"))
    rc.kappa = tensor("material.kappa", *e);

  if (const auto *e = get("solver.cfl")) {
    rc.cfl = positive("solver.cfl", *e);
    if (*rc.cfl > 1.0)
      fail("solver.cfl", *e, fmt::format("CFL factor {} must lie in (0,1]", *rc.cfl));
  }
  if (const auto *e = get("solver.dt"))
    rc.dt = positive("solver.dt", *e);
  if (const auto *e = get("solver.steps")) {
    rc.steps = to_long("solver.steps", *e, trim(e->value));
    if (*rc.steps < 0)
      fail("solver.steps", *e, "must be non-negative");
  }
  if (const auto *e = get("solver.boundary")) {
    const auto toks = split_list(lower(e->value));
    if (toks.size() != 1 && toks.size() != 3)
      fail("solver.boundary", *e, fmt::format("expected 1 or 3 entries, got {}", toks.size()));
    Boundaries b{};
    for (int k = 0; k < 3; ++k) {
      const std::string &t = toks[toks.size() == 1 ? 0 : static_cast<std::size_t>(k)];
      if (t == "pec")
        b[k] = Boundary::Pec;
      else if (t == "periodic")
        b[k] = Boundary::Periodic;
      else
        fail("solver.boundary", *e, fmt::format("'{}' is not one of: pec, periodic", t));
    }
    rc.boundary = b;
  }
  if (const auto *e = get("solver.gaussian_poynting"))
    rc.gaussian_poynting = boolean("solver.gaussian_poynting", *e);

  if (const auto *e = get("output.dir")) {
    if (e->value.empty())
      fail("output.dir", *e, "empty path");
    rc.out_dir = e->value;
  }
  if (const auto *e = get("output.cadence")) {
    const long v = to_long("output.cadence", *e, trim(e->value));
    if (v < 0 || v > 1000000)
      fail("output.cadence", *e, fmt::format("cadence {} outside [0, 1000000]", v));
    rc.cadence = static_cast<int>(v);
  }
  if (const auto *e = get("run.seed")) {
    const long v = to_long("run.seed", *e, trim(e->value));
    if (v < 0)
      fail("run.seed", *e, "must be non-negative");
    rc.seed = static_cast<std::uint64_t>(v);
  }
  if (const auto *e = get("run.fields")) {
    const long v = to_long("run.fields", *e, trim(e->value));
    if (v < 1 || v > 1000)
      fail("run.fields", *e, fmt::format("{} outside [1, 1000]", v));
    rc.fields = static_cast<int>(v);
  }
  if (const auto *e = get("run.resolutions")) {
    for (const auto &t : split_list(e->value)) {
      const long v = to_long("run.resolutions", *e, t);
      if (v < 4 || v > 4096)
        fail("run.resolutions", *e, fmt::format("resolution {} outside [4, 4096]", v));
      rc.resolutions.push_back(static_cast<int>(v));
    }
    if (rc.resolutions.empty())
      fail("run.resolutions", *e, "empty list");
  }

  // Cross-field checks against the library's own preconditions.
  try {
    const SimConfig cfg = simulation(rc);
    cfg.validate();
    if (is_run(subcommand)) {
      if (subcommand == "run-maxwell" || subcommand == "energy-audit") {
        if (cfg.material.units != Units::SiNormalized)
          throw DomainError("material.units: the Maxwell stepper runs in si units");
      } else if (cfg.material.units != Units::Gaussian) {
        throw DomainError("material.units: this solver runs in gaussian units");
      }
    }
    (void)cfg.build_grid();
  } catch (const DomainError &err) {
    const std::string msg = err.what();
    const std::string key = key_for(msg);
    const auto it = doc.find(key);
    if (it != doc.end())
      fail(key, it->second, msg);
    throw ConfigError(key.empty() ? msg : fmt::format("{} (scenario default): {}", key, msg));
  }
  return rc;
}

SimConfig simulation(const RunConfig &rc, int n) {
  if (n <= 0)
    n = rc.resolution;
  SimConfig cfg;
  const std::string &s = rc.scenario;
  if (n <= 0) {
    const auto it = kDefaultResolution.find(s);
    n = it != kDefaultResolution.end() ? it->second : 16;
  }
  if (const auto o = oracle(rc, n)) {
    cfg = o->config;
  } else if (s == "driven_cavity") {
    cfg = driven_cavity(n);
  } else if (s == "lossless_cavity") {
    double period = 0.0;
    cfg = lossless_cavity(n, 1.0, period);
  } else if (s == "charge_ramp") {
    cfg = charge_ramp(n);
  } else if (s == "constraint") {
    cfg = constraint_run(n, 1000, rc.seed);
  } else {
    cfg.n = {n, n, n};
    cfg.dims.alpha = rc.subcommand == "verify-theorems" ? Vec3{0.5, 0.5, 1.0}
                                                        : Vec3{0.9, 0.6, 0.8};
  }
  if (rc.alpha)
    cfg.dims.alpha = *rc.alpha;
  if (rc.l)
    cfg.dims.l = *rc.l;
  if (rc.l0)
    cfg.dims.l0 = *rc.l0;
  if (rc.cells)
    cfg.n = *rc.cells;
  if (rc.L)
    cfg.L = *rc.L;
  if (rc.margin)
    cfg.margin = *rc.margin;
  if (rc.units)
    cfg.material.units = *rc.units;
  if (rc.eps0)
    cfg.material.eps0 = *rc.eps0;
  if (rc.mu0)
    cfg.material.mu0 = *rc.mu0;
  if (rc.c)
    cfg.material.c = *rc.c;
  else if (cfg.material.units == Units::SiNormalized && (rc.eps0 || rc.mu0))
    cfg.material.c = 1.0 / std::sqrt(cfg.material.eps0 * cfg.material.mu0);
  if (rc.sigma)
    cfg.material.sigma = *rc.sigma;
  if (rc.kappa)
    cfg.material.kappa = *rc.kappa;
  if (rc.cfl) {
    cfg.cfl = *rc.cfl;
    cfg.dt = 0.0;
  }
  if (rc.dt)
    cfg.dt = *rc.dt;
  if (rc.steps)
    cfg.steps = *rc.steps;
  if (rc.boundary)
    cfg.boundary = *rc.boundary;
  if (rc.gaussian_poynting)
    cfg.gaussian_poynting = *rc.gaussian_poynting;
  if (rc.cadence)
    cfg.cadence = *rc.cadence;
  return cfg;
}

std::optional<OracleScenario> oracle(const RunConfig &rc, int n) {
  if (n <= 0)
    n = rc.resolution > 0 ? rc.resolution : 0;
  if (n <= 0) {
    const auto it = kDefaultResolution.find(rc.scenario);
    n = it != kDefaultResolution.end() ? it->second : 16;
  }
  const std::string &s = rc.scenario;
  if (s == "plane_wave")
    return plane_wave(n);
  if (s == "maxwell_pulse")
    return maxwell_pulse(n);
  if (s == "dielectric_pulse")
    return dielectric_pulse(n);
  if (s == "heat_kernel")
    return heat_kernel(n);
  if (s == "heat_mode")
    return heat_mode(n);
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> resolved_config(const RunConfig &rc) {
  const SimConfig cfg = simulation(rc);
  Vec3 margin = cfg.margin;
  const Vec3 def = default_margin(cfg.dims);
  for (int k = 0; k < 3; ++k)
    if (!(margin[k] > 0.0))
      margin[k] = def[k];
  auto bc = [](Boundary b) { return b == Boundary::Pec ? "pec" : "periodic"; };
  std::string res;
  for (std::size_t i = 0; i < rc.resolutions.size(); ++i)
    res += (i ? ", " : "") + std::to_string(rc.resolutions[i]);
  return {
      {"subcommand", rc.subcommand},
      {"run.scenario", rc.scenario},
      {"fractal.alpha", vec_str(cfg.dims.alpha)},
      {"fractal.l", vec_str(cfg.dims.l)},
      {"fractal.l0", vec_str(cfg.dims.l0)},
      {"grid.n", fmt::format("{}, {}, {}", cfg.n[0], cfg.n[1], cfg.n[2])},
      {"grid.L", vec_str(cfg.L)},
      {"grid.margin", vec_str(margin)},
      {"material.units", cfg.material.units == Units::Gaussian ? "gaussian" : "si"},
      {"material.eps0", g17(cfg.material.eps0)},
      {"material.mu0", g17(cfg.material.mu0)},
      {"material.c", g17(cfg.material.c)},
      {"material.sigma", tensor_str(cfg.material.sigma)},
      {"material.kappa", tensor_str(cfg.material.kappa)},
      {"solver.cfl", g17(cfg.cfl)},
      {"solver.dt", g17(cfg.dt)},
      {"solver.steps", std::to_string(cfg.steps)},
      {"solver.boundary", fmt::format("{}, {}, {}", bc(cfg.boundary[0]), bc(cfg.boundary[1]),
                                      bc(cfg.boundary[2]))},
      {"solver.gaussian_poynting", cfg.gaussian_poynting ? "true" : "false"},
      {"output.dir", rc.out_dir},
      {"output.cadence", std::to_string(cfg.cadence)},
      {"run.seed", std::to_string(rc.seed)},
      {"run.resolutions", res.empty() ? "subcommand default" : res},
      {"run.fields", std::to_string(rc.fields)},
  };
}

} // namespace femf::cli
