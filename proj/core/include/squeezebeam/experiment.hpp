#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "squeezebeam/dynamics.hpp"
#include "squeezebeam/model.hpp"
#include "squeezebeam/observables.hpp"
#include "squeezebeam/optics.hpp"

namespace squeezebeam {

struct Scenario {
  std::string label = "run";
  PhysicalParams physical{};
  Grid grid{};
  DetectorSpec detector{};
  EvolutionConfig evolution{};
  OpticalStateSpec optical_state = FockState{1};

  void validate() const;

  bool operator==(const Scenario&) const = default;
};

struct TimePoint {
  double t = 0;
  BeamStatistics stats{};
  double attenuation = 1;
  double flux_residual = 0;     // largest per-step residual since the previous point
  double detector_current = 0;  // atomic current at x1 per incoming photon flux
};

struct ScenarioResult {
  std::string label;
  Trajectory trajectory;
  std::vector<TimePoint> series;
  Densities final_densities;
  std::vector<double> condensate_density;  // |phi0|^2
  OpticalMoments moments{};
  double kappa = 1;
  double leave_time = 0;
  ResonanceTerms resonance{};
  double min_commutator_residual = 0;
  std::vector<std::string> warnings;
};

/// Evolves the scenario and evaluates beam statistics at every snapshot.
/// Integration failures are rethrown as NumericalError tagged with the label.
ScenarioResult run_scenario(const Scenario& scenario);

struct MinimumVFock {
  double value = 0;
  double t = 0;
};

/// Smallest v_fock over points with t >= exclude_before; ties go to the
/// earliest time.
MinimumVFock min_vfock_over_time(const std::vector<TimePoint>& series, double exclude_before);

enum class SweepParameter { DeltaOffset, Omega23 };

struct SweepSpec {
  Scenario base{};
  SweepParameter parameter = SweepParameter::DeltaOffset;
  std::vector<double> values;
  std::optional<double> exclude_before;  // default: half the leave time

  void validate() const;
};

struct SweepRecord {
  double value = 0;
  double min_vfock = 0;
  double t_min = 0;
  double final_N_g = 0;
  double attenuation = 1;
  std::optional<std::string> error;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::DeltaOffset;
  std::vector<SweepRecord> records;
  std::optional<std::size_t> argmin;  // ties go to the smallest value
};

/// The base scenario with one parameter replaced.
Scenario sweep_point(const SweepSpec& spec, double value);

/// Reduction of one scenario run to a sweep record.
SweepRecord reduce(const ScenarioResult& result, double value, std::optional<double> exclude_before);

/// Runs every point on up to `workers` threads. Records come back in input
/// order and do not depend on the worker count.
SweepResult sweep(const SweepSpec& spec, std::size_t workers = 1);

}  // namespace squeezebeam
