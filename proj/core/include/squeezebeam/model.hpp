#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "squeezebeam/constants.hpp"
#include "squeezebeam/field.hpp"

namespace squeezebeam {

enum class DetuningMode { Offset, Absolute };
enum class Geometry { CounterPropagating, CoPropagating };

/// How the rate entering T_Rabi/4 = pi / (2 * rate) is extracted from the
/// coupling profile when estimating the balance point with T_leave.
enum class RabiInterpretation {
  Peak,               // rate = max Omega_C(x)
  IntegralOverWidth,  // rate = (integral of Omega_C dx) / sigma
  TravelingWave,      // rate = (integral of Omega_C dx) / sigma * sqrt(v / c)
};

enum class KappaMode { Fixed, MatchEstimate };

struct Calibration {
  KappaMode mode = KappaMode::Fixed;
  RabiInterpretation interpretation = RabiInterpretation::TravelingWave;
  double target_Omega23 = 2.3e12;  // rad/s, used by MatchEstimate

  bool operator==(const Calibration&) const = default;
};

/// Physical inputs in SI units, frequencies in rad/s.
struct PhysicalParams {
  double m = 1.4e-25;
  double omega_t = 20.0;
  double g13 = 28.9;
  double N = 1.0e6;
  double Delta = 1.0e11;
  double Omega23 = 2.1e12;
  DetuningMode delta_mode = DetuningMode::Offset;
  double delta = 0.0;  // offset from delta_0, or absolute two-photon detuning
  double lambda = 780e-9;
  std::optional<double> lambda_pump;  // defaults to lambda
  Geometry geometry = Geometry::CounterPropagating;
  double kappa = 1.0;
  Calibration calibration{};
  double c = constants::speed_of_light;

  void validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

/// Atom-number detector [x1, x2] and the probe normalization window.
struct DetectorSpec {
  double x1 = 0.04e-3;
  double x2 = 0.06e-3;
  double probe_window = 0.02e-3;

  void validate(const Grid& grid) const;

  bool operator==(const DetectorSpec&) const = default;
};

/// Contributions to the two-photon resonance detuning delta_0.
struct ResonanceTerms {
  double kinetic = 0;      // hbar k^2 / 2m
  double condensate = 0;   // |g13|^2 N |phi0(0)|^2 / Delta
  double light_shift = 0;  // |Omega23|^2 / Delta
  double trap = 0;         // omega_t
  double total = 0;        // kinetic + condensate - light_shift - trap
};

ComplexField condensate_ground_state(const PhysicalParams& params, const Grid& grid);

/// Omega_C(x) = kappa * Omega23 * g13 * sqrt(N) * phi0(x) / Delta.
ComplexField coupling_profile(const PhysicalParams& params, const Grid& grid,
                              const ComplexField& phi0);

/// |k0 - kp| in 1/m.
double momentum_transfer(const PhysicalParams& params);
/// hbar |k0 - kp| / m.
double recoil_velocity(const PhysicalParams& params);
/// sqrt(hbar / (m omega_t)).
double condensate_width(const PhysicalParams& params);
/// (m omega_t / (pi hbar))^(1/4).
double condensate_peak(const PhysicalParams& params);
/// sigma / recoil velocity.
double leave_time(const PhysicalParams& params);

ResonanceTerms resonance_detuning(const PhysicalParams& params, double phi0_at_origin);

/// Amplitude p_in with (m c / hbar k) * |p_in|^2 * probe_window = 1.
double probe_input_amplitude(const PhysicalParams& params, const DetectorSpec& detector);

/// Omega23 at which T_leave equals a quarter Rabi period, under the chosen
/// reading of the coupling integral. Uses params.kappa as given.
double optimal_pump_rabi_estimate(const PhysicalParams& params, const ComplexField& phi0,
                                  RabiInterpretation interpretation);

/// kappa that makes optimal_pump_rabi_estimate hit calibration.target_Omega23.
double calibrated_kappa(const PhysicalParams& params, const ComplexField& phi0);

/// Adiabatic-elimination sanity checks; an empty result means all pass.
std::vector<std::string> validity_warnings(const PhysicalParams& params);

/// Rotating frame for reported fields: i d/dt picks up -C on both modes.
enum class GaugeKind {
  LightShift,    // C = -|Omega23|^2 / Delta
  Zero,          // C = 0
  Resonance,     // C = delta_0
  ProbeCarrier,  // C = delta, the probe is stationary
  Custom,        // C = value
};

struct Gauge {
  GaugeKind kind = GaugeKind::LightShift;
  double value = 0.0;

  static Gauge custom(double c) { return {GaugeKind::Custom, c}; }

  bool operator==(const Gauge&) const = default;
};

/// Derived quantities for one parameter set on one grid. Immutable.
class Model {
 public:
  Model(PhysicalParams params, Grid grid, DetectorSpec detector = {});

  /// Parameters with kappa resolved (MatchEstimate replaced by its value).
  const PhysicalParams& params() const noexcept { return params_; }
  const Grid& grid() const noexcept { return grid_; }
  const DetectorSpec& detector() const noexcept { return detector_; }

  double kappa() const noexcept { return params_.kappa; }
  double wavenumber() const noexcept { return k_; }
  double recoil_velocity() const noexcept { return v_; }
  double sigma() const noexcept { return sigma_; }
  double leave_time() const noexcept { return sigma_ / v_; }
  double hbar_over_m() const noexcept { return constants::hbar / params_.m; }

  const ComplexField& phi0() const noexcept { return phi0_; }
  double phi0_at_origin() const noexcept { return phi0_origin_; }

  std::span<const double> coupling() const noexcept { return coupling_; }
  std::span<const double> potential() const noexcept { return potential_; }
  /// U at the cell midpoints x_j + dx/2.
  std::span<const double> potential_mid() const noexcept { return potential_mid_; }

  double probe_amplitude() const noexcept { return p_in_; }
  /// c |p_in|^2: incoming photon flux per unit occupation of the probe mode.
  double probe_flux() const noexcept { return params_.c * p_in_ * p_in_; }

  const ResonanceTerms& resonance() const noexcept { return resonance_; }

  /// Bare atomic energy hbar k^2/2m - |Omega23|^2/Delta - omega_t.
  double atom_energy() const noexcept;
  /// Absolute two-photon detuning delta.
  double two_photon_detuning() const noexcept;
  /// delta minus the bare atomic energy; exact in offset mode.
  double probe_detuning() const noexcept;

  double gauge_constant(Gauge gauge) const noexcept;
  /// Atomic energy in the gauge frame, atom_energy() - C.
  double atom_offset(Gauge gauge) const noexcept;
  /// Probe carrier frequency in the gauge frame, delta - C.
  double carrier_frequency(Gauge gauge) const noexcept;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  PhysicalParams params_;
  Grid grid_;
  DetectorSpec detector_;
  double k_ = 0;
  double v_ = 0;
  double sigma_ = 0;
  ComplexField phi0_;
  double phi0_origin_ = 0;
  std::vector<double> coupling_;
  std::vector<double> potential_;
  std::vector<double> potential_mid_;
  double p_in_ = 0;
  ResonanceTerms resonance_{};
  std::vector<std::string> warnings_;
};

}  // namespace squeezebeam
