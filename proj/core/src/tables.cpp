#include "squeezebeam/tables.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <system_error>

#include "json.hpp"
#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("table has no column '" + std::string(name) + "'");
}

Table densities_table(const ScenarioResult& result, const Grid& grid) {
  Table t{{"x_m", "atom_density", "photon_density", "condensate_density"}, {}};
  const auto& d = result.final_densities;
  t.rows.reserve(d.atom.size());
  for (std::size_t j = 0; j < d.atom.size(); ++j)
    t.rows.push_back({grid.x(j), d.atom[j], d.photon[j], result.condensate_density[j]});
  return t;
}

Table timeseries_table(const ScenarioResult& result) {
  Table t{{"t_s", "N_g", "v_fock", "v", "attenuation", "flux_residual"}, {}};
  for (const TimePoint& p : result.series)
    t.rows.push_back({p.t, p.stats.N_g, p.stats.v_fock, p.stats.v, p.attenuation, p.flux_residual});
  return t;
}

Table sweep_table(const SweepResult& result) {
  Table t{{"param_value", "min_vfock", "t_min_s", "final_N_g", "attenuation"}, {}};
  for (const SweepRecord& r : result.records)
    t.rows.push_back({r.value, r.min_vfock, r.t_min, r.final_N_g, r.attenuation});
  return t;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

ordered_json finite_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string manifest_json(const Manifest& m) {
  ordered_json j;
  j["tool"] = "squeezebeam";
  j["tool_version"] = kToolVersion;
  j["command"] = m.command;
  j["created_utc"] = utc_timestamp();
  j["wall_time_s"] = m.wall_time_s;
  j["status"] = m.error ? "error" : "ok";
  if (m.error) j["error"] = *m.error;
  j["config"] = m.config ? ordered_json::parse(serialize_config(*m.config)) : ordered_json(nullptr);
  ordered_json summary = ordered_json::object();
  for (const auto& [key, value] : m.summary) summary[key] = finite_or_null(value);
  j["summary"] = summary;
  j["warnings"] = m.warnings;
  j["files"] = m.files;
  return j.dump(2) + "\n";
}

void write_manifest(const Manifest& manifest, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error("cannot create output directory '" + directory.string() + "': " + ec.message());
  write_file(directory / "manifest.json", manifest_json(manifest));
}

std::vector<std::string> write_bundle(ResultBundle bundle, const fs::path& directory) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [stem, table] : bundle.tables) files.emplace_back(stem + ".csv", to_csv(table));
  for (auto& [name, svg] : bundle.plots) files.emplace_back(name, std::move(svg));

  std::vector<fs::path> written;
  try {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw Error("cannot create output directory '" + directory.string() + "': " + ec.message());
    for (const auto& [name, text] : files) {
      const fs::path tmp = directory / (name + ".tmp");
      written.push_back(tmp);
      write_file(tmp, text);
      fs::rename(tmp, directory / name);
      written.back() = directory / name;
      bundle.manifest.files.push_back(name);
    }
  } catch (const std::exception& e) {
    std::error_code ignored;
    for (const auto& path : written) fs::remove(path, ignored);
    bundle.manifest.files.clear();
    bundle.manifest.error = e.what();
    try {
      write_manifest(bundle.manifest, directory);
    } catch (const std::exception&) {
    }
    throw Error(e.what());
  }
  bundle.manifest.files.push_back("manifest.json");
  write_manifest(bundle.manifest, directory);
  return bundle.manifest.files;
}

}  // namespace squeezebeam
