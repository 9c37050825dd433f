#include "femf/cli.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <memory>

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

namespace femf::cli {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const fs::path &p, const char *what) {
  throw std::runtime_error(fmt::format("{} {}: {}", what, p.string(), std::strerror(errno)));
}

void write_text(const fs::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out)
    io_error(p, "cannot create");
  out << text;
  if (!out)
    io_error(p, "failed writing");
}

} // namespace

std::string sha256_hex(const fs::path &file) {
  std::ifstream in(file, std::ios::binary);
  if (!in)
    io_error(file, "cannot read");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 initialisation failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i)
    hex += fmt::format("{:02x}", md[i]);
  return hex;
}

void write_csv(const fs::path &path, const CsvTable &table) {
  std::string text;
  for (std::size_t i = 0; i < table.header.size(); ++i)
    text += (i ? "," : "") + table.header[i];
  text += '\n';
  for (const auto &row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      text += fmt::format("{}{:.17g}", i ? "," : "", row[i]);
    text += '\n';
  }
  write_text(path, text);
}

CsvTable diagnostics_table(const std::vector<DiagnosticRow> &rows) {
  CsvTable t{{"step", "t", "energy", "surface", "joule", "rate", "closure", "div_b", "div_e",
              "norm"},
             {}};
  for (const auto &r : rows)
    t.rows.push_back({static_cast<double>(r.step), r.t, r.energy, r.surface, r.joule, r.rate,
                      r.closure, r.div_b, r.div_e, r.norm});
  return t;
}

CsvTable energy_table(const std::vector<DiagnosticRow> &rows) {
  CsvTable t{{"frame", "t", "surface", "joule", "rate", "closure"}, {}};
  for (const auto &r : rows)
    t.rows.push_back({static_cast<double>(r.step), r.t, r.surface, r.joule, r.rate, r.closure});
  return t;
}

fs::path write_outputs(const RunOutputs &out, const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error(
        fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
  std::vector<std::string> files;
  for (const auto &[name, table] : out.tables) {
    write_csv(dir / name, table);
    files.push_back(name);
  }
  for (const auto &r : out.reports) {
    const std::string name = fmt::format("report_{}.txt", r.check);
    write_text(dir / name, r.table());
    files.push_back(name);
  }
  if (!out.frames.empty() && !out.grid)
    throw std::logic_error("write_outputs: frames without a grid");
  for (const auto &f : out.frames) {
    const std::string name = fmt::format("frame_{:08d}.femf", f.step);
    std::ofstream os(dir / name, std::ios::binary);
    if (!os)
      io_error(dir / name, "cannot create");
    write_snapshot(os, *out.grid, f.field);
    files.push_back(name);
  }

  nlohmann::ordered_json m;
  m["format"] = "femf-manifest";
  m["version"] = 1;
  m["subcommand"] = out.subcommand;
  m["status"] = out.status;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto &[k, v] : out.config)
    cfg[k] = v;
  m["config"] = cfg;
  m["reports"] = nlohmann::ordered_json::array();
  for (const auto &r : out.reports) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (const auto &[k, v] : r.records())
      rec[k] = v;
    m["reports"].push_back(rec);
  }
  m["files"] = nlohmann::ordered_json::array();
  for (const auto &name : files)
    m["files"].push_back({{"path", name},
                          {"bytes", fs::file_size(dir / name)},
                          {"sha256", sha256_hex(dir / name)}});
  const fs::path manifest = dir / "manifest.json";
  write_text(manifest, m.dump(2) + "\n");
  return manifest;
}

} // namespace femf::cli
