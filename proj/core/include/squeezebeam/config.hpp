#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "squeezebeam/experiment.hpp"

namespace squeezebeam {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kSchemaVersion = "1.0";

enum class ExperimentMode { Run, SweepDelta, SweepRabi };

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::Run;
  std::vector<double> values;            // swept values, ascending
  std::optional<double> exclude_before;  // seconds; default half the leave time

  bool operator==(const ExperimentSpec&) const = default;
};

struct OutputSpec {
  std::string directory = "out";
  std::vector<std::string> formats{"csv"};  // subset of {"csv", "svg"}

  bool wants(std::string_view format) const;

  bool operator==(const OutputSpec&) const = default;
};

/// A fully validated run description. All quantities in SI units, angular
/// frequencies in rad/s.
struct ConfigDocument {
  std::string schema_version{kSchemaVersion};
  Scenario scenario{};
  ExperimentSpec experiment{};
  OutputSpec output{};

  SweepSpec sweep_spec() const;

  bool operator==(const ConfigDocument&) const = default;
};

/// Parses and validates a JSON document, applying defaults for absent keys.
/// Unknown keys, type mismatches and invariant violations are collected into
/// a single ValidationError; syntax errors report line and column.
ConfigDocument parse_config(std::string_view text);

/// Reads and parses a file; unreadable paths raise ValidationError.
ConfigDocument load_config(const std::filesystem::path& path);

/// Parses an optical state object on its own, e.g.
/// {"kind": "squeezed-coherent", "alpha": [1, 0], "r": 0.5, "theta": 0}.
OpticalStateSpec parse_optical_state(std::string_view text);

/// Canonical JSON text with every field spelled out.
std::string serialize_config(const ConfigDocument& doc);

std::string_view to_string(ExperimentMode mode);
std::string_view to_string(GaugeKind kind);

/// Closest known key for an unrecognized one, or empty.
std::string suggest_key(std::string_view unknown, const std::vector<std::string>& known);

}  // namespace squeezebeam
