#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "squeezebeam/field.hpp"
#include "squeezebeam/kinetic.hpp"
#include "squeezebeam/model.hpp"

namespace squeezebeam {

/// Momentum-shifted atomic mode function and probe envelope at time t,
/// both expressed in the rotating frame selected by a Gauge.
struct ModePairState {
  double t = 0.0;
  ComplexField g_tilde;
  ComplexField p_tilde;
};

struct EvolutionConfig {
  double dt = 1.0e-7;
  double t_final = 7.2e-3;
  Gauge gauge{};
  std::size_t snapshot_stride = 0;  // 0: choose so that at most 200 snapshots are kept
  DerivativeScheme derivative_scheme = DerivativeScheme::Spectral;

  void validate() const;
  std::size_t step_count() const;
  std::size_t effective_stride() const;

  bool operator==(const EvolutionConfig&) const = default;
};

/// Scalars recorded after every accepted step.
struct StepRecord {
  double t = 0;
  double atom_norm = 0;         // sum |g|^2 dx
  double probe_left = 0;        // |p(x_min)|^2
  double probe_right = 0;       // |p(x_max - dx)|^2
  double flux_residual = 0;     // relative mismatch of the step's norm change vs boundary flux
};

struct Trajectory {
  std::vector<ModePairState> snapshots;
  std::vector<StepRecord> steps;
  std::vector<std::string> warnings;
  std::optional<std::string> error;  // set when the run aborted early

  double max_flux_residual() const noexcept;
  bool ok() const noexcept { return !error.has_value(); }
};

/// d g/dt in the gauge frame:
/// i dg/dt = (T + E_C) g - Omega_C p, with E_C = atom_offset(gauge).
ComplexField atomic_rhs(const ModePairState& state, const Model& model, Gauge gauge,
                        KineticOperator& kinetic);

/// Probe envelope consistent with g at time t, in the gauge frame.
///
/// In the probe's own carrier frame the envelope obeys
///   i c dP/dx = -U(x) P - Omega_C(x) G,   P(x_min) = p_in,
/// integrated left to right with classical RK4 at the grid spacing; the
/// source at half steps is cubic-interpolated. The result is rotated into
/// the gauge frame by exp(-i (delta - C) t).
ComplexField solve_probe_envelope(const ComplexField& g_tilde, const Model& model, Gauge gauge,
                                  double t);

/// Same solve, returning the estimated relative error of the outflow
/// amplitude from a step-doubling comparison.
double probe_step_error(const ComplexField& g_tilde, const Model& model);

/// One RK4 step of size config.dt. The probe is re-solved at every stage;
/// the uniform frame rotation is applied exactly.
ModePairState rk4_time_step(const ModePairState& state, const Model& model,
                            const EvolutionConfig& config, KineticOperator& kinetic);

/// Initial state: no outcoupled atoms, probe filled with the inflow plane wave.
ModePairState initial_state(const Model& model, Gauge gauge);

KineticOperator make_kinetic(const Model& model, DerivativeScheme scheme);

/// Evolve from the initial state to config.t_final.
Trajectory evolve(const Model& model, const EvolutionConfig& config);

}  // namespace squeezebeam
