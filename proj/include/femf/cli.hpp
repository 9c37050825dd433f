#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "femf/scenarios.hpp"
#include "femf/verification.hpp"

namespace femf::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsage = 2, kAbort = 3 };

/// Invalid configuration; the message names the origin (file:line or flag)
/// and the offending key.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct IniEntry {
  std::string value;
  std::string origin; // "path:line" or "--set"
};

/// Flat "section.key" -> entry map of an INI-style document. Comments start
/// with '#' or ';'. Keys outside any section and duplicate keys are errors.
using IniDocument = std::map<std::string, IniEntry>;

IniDocument parse_ini(std::istream &in, const std::string &source);
IniDocument parse_ini_file(const std::filesystem::path &path);
/// Applies "section.key=value" on top of `doc`.
void apply_override(IniDocument &doc, const std::string &assignment);

inline const std::vector<std::string> kSubcommands{
    "verify-identities", "verify-theorems", "verify-variational", "run-maxwell",
    "run-conductor",     "run-dielectric",  "energy-audit"};

struct RunConfig {
  std::string subcommand;
  std::string scenario;
  int resolution = 0;

  // Explicit settings; unset members keep the scenario's value.
  std::optional<Vec3> alpha, l, l0, L, margin;
  std::optional<std::array<int, 3>> cells;
  std::optional<Units> units;
  std::optional<double> eps0, mu0, c;
  std::optional<Eigen::Matrix3d> sigma, kappa;
  std::optional<double> cfl, dt;
  std::optional<long> steps;
  std::optional<Boundaries> boundary;
  std::optional<bool> gaussian_poynting;
  std::optional<int> cadence;

  std::vector<int> resolutions;
  int fields = 10;
  std::uint64_t seed = 1;
  std::string out_dir = "femf_out";

  std::map<std::string, std::string> origins;
};

/// Scenarios selectable by each run subcommand; the first is the default.
std::vector<std::string> scenarios_for(const std::string &subcommand);

/// Typed, validated configuration. Unknown keys, malformed values and
/// invalid combinations raise ConfigError naming the key and its origin.
RunConfig parse_config(const IniDocument &doc, const std::string &subcommand);

/// Scenario preset at `n` cells along axis 0 (0: the config resolution),
/// with the explicit settings applied on top.
SimConfig simulation(const RunConfig &rc, int n = 0);
/// Oracle for oracle scenarios, empty otherwise.
std::optional<OracleScenario> oracle(const RunConfig &rc, int n = 0);

/// Every setting with its resolved value, defaults included.
std::vector<std::pair<std::string, std::string>> resolved_config(const RunConfig &rc);

// Outputs

std::string sha256_hex(const std::filesystem::path &file);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// '.' decimal, 17 significant digits.
void write_csv(const std::filesystem::path &path, const CsvTable &table);
CsvTable diagnostics_table(const std::vector<DiagnosticRow> &rows);
CsvTable energy_table(const std::vector<DiagnosticRow> &rows);

struct RunOutputs {
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<VerificationReport> reports;
  std::vector<Frame> frames;
  std::optional<StaggeredGrid> grid;
  std::vector<std::pair<std::string, std::string>> config;
  std::string subcommand;
  int status = kPass;
};

/// Writes CSV tables, one report text per check, one snapshot per frame and
/// manifest.json (config, report records, SHA-256 of every file). Returns
/// the manifest path.
std::filesystem::path write_outputs(const RunOutputs &out, const std::filesystem::path &dir);

/// Runs the configured subcommand and fills `out`; status as ExitCode.
int dispatch(const RunConfig &rc, RunOutputs &out);

/// Full command line entry point.
int run(int argc, char **argv);

} // namespace femf::cli
