#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "squeezebeam/config.hpp"
#include "squeezebeam/experiment.hpp"

namespace squeezebeam {

/// Column-major numeric table with a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;  // throws ValidationError if absent
};

/// x_m, atom_density, photon_density, condensate_density at the final time.
Table densities_table(const ScenarioResult& result, const Grid& grid);
/// t_s, N_g, v_fock, v, attenuation, flux_residual per snapshot.
Table timeseries_table(const ScenarioResult& result);
/// param_value, min_vfock, t_min_s, final_N_g, attenuation per sweep point.
Table sweep_table(const SweepResult& result);

/// Comma-separated, 17 significant digits, '\n' line endings.
std::string to_csv(const Table& table);

struct Manifest {
  std::string command;
  std::optional<ConfigDocument> config;
  double wall_time_s = 0;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> files;
  std::optional<std::string> error;
};

std::string manifest_json(const Manifest& manifest);

struct ResultBundle {
  Manifest manifest;
  std::vector<std::pair<std::string, Table>> tables;       // file stem, table
  std::vector<std::pair<std::string, std::string>> plots;  // file name, SVG text
};

/// Writes `<stem>.csv` for every table, the plots and manifest.json. Data
/// files go through a temporary name and are removed again if any write
/// fails; the manifest is then written with the error recorded and the
/// failure rethrown as Error. Returns the file names written.
std::vector<std::string> write_bundle(ResultBundle bundle, const std::filesystem::path& directory);

/// Writes only manifest.json, for runs that failed before producing data.
void write_manifest(const Manifest& manifest, const std::filesystem::path& directory);

}  // namespace squeezebeam
