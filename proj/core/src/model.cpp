#include "squeezebeam/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace {

std::string describe(const char* field, double value, const char* requirement) {
  std::ostringstream os;
  os << field << " = " << value << " " << requirement;
  return os.str();
}

double gaussian(double x, double sigma) { return std::exp(-x * x / (2.0 * sigma * sigma)); }

}  // namespace

void Grid::validate() const {
  std::vector<std::string> issues;
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max))
    issues.push_back("grid.x_min must be less than grid.x_max");
  if (n_x < 16) issues.push_back(describe("grid.n_x", static_cast<double>(n_x), "must be >= 16"));
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ComplexField::ComplexField(const Grid& grid, std::vector<cdouble> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_x)
    throw ValidationError("field length does not match grid point count");
}

bool ComplexField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const cdouble& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double ComplexField::norm_squared() const noexcept {
  double sum = 0;
  for (const auto& z : values_) sum += std::norm(z);
  return sum * grid_.dx();
}

void PhysicalParams::validate() const {
  std::vector<std::string> issues;
  auto positive = [&](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0)) issues.push_back(describe(name, v, "must be positive"));
  };
  auto finite = [&](const char* name, double v) {
    if (!std::isfinite(v)) issues.push_back(describe(name, v, "must be finite"));
  };
  positive("physical.m", m);
  positive("physical.omega_t", omega_t);
  positive("physical.Delta", Delta);
  positive("physical.lambda", lambda);
  positive("physical.c", c);
  positive("physical.kappa", kappa);
  finite("physical.g13", g13);
  finite("physical.Omega23", Omega23);
  finite("physical.delta", delta);
  if (!(std::isfinite(N) && N >= 1)) issues.push_back(describe("physical.N", N, "must be >= 1"));
  if (lambda_pump) positive("physical.lambda_pump", *lambda_pump);
  if (calibration.mode == KappaMode::MatchEstimate)
    positive("physical.calibration.target_Omega23", calibration.target_Omega23);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

void DetectorSpec::validate(const Grid& grid) const {
  std::vector<std::string> issues;
  if (!(x1 < x2)) issues.push_back("detector.x1 must be less than detector.x2");
  if (x1 < grid.x_min || x2 > grid.x_max)
    issues.push_back("detector [x1, x2] must lie inside [grid.x_min, grid.x_max]");
  if (!(std::isfinite(probe_window) && probe_window > 0))
    issues.push_back(describe("detector.probe_window", probe_window, "must be positive"));
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

double condensate_width(const PhysicalParams& p) {
  return std::sqrt(constants::hbar / (p.m * p.omega_t));
}

double condensate_peak(const PhysicalParams& p) {
  return std::pow(p.m * p.omega_t / (constants::pi * constants::hbar), 0.25);
}

ComplexField condensate_ground_state(const PhysicalParams& params, const Grid& grid) {
  grid.validate();
  const double sigma = condensate_width(params);
  const double edge = std::max(gaussian(grid.x_min, sigma), gaussian(grid.x_max, sigma));
  if (edge > 1e-6) {
    std::ostringstream os;
    os << "grid [" << grid.x_min << ", " << grid.x_max
       << "] m is too narrow for the condensate: boundary amplitude is " << edge
       << " of the peak (sigma = " << sigma << " m)";
    throw GridTooNarrowError(os.str());
  }
  ComplexField phi(grid);
  const double peak = condensate_peak(params);
  for (std::size_t j = 0; j < grid.n_x; ++j) phi[j] = peak * gaussian(grid.x(j), sigma);
  const double scale = 1.0 / std::sqrt(phi.norm_squared());
  for (auto& z : phi.values()) z *= scale;
  return phi;
}

ComplexField coupling_profile(const PhysicalParams& params, const Grid& grid,
                              const ComplexField& phi0) {
  const double amplitude =
      params.kappa * params.Omega23 * params.g13 * std::sqrt(params.N) / params.Delta;
  ComplexField omega(grid);
  for (std::size_t j = 0; j < grid.n_x; ++j) omega[j] = amplitude * phi0[j];
  return omega;
}

double momentum_transfer(const PhysicalParams& params) {
  const double kp = 2.0 * constants::pi / params.lambda;
  const double k0 = 2.0 * constants::pi / params.lambda_pump.value_or(params.lambda);
  return params.geometry == Geometry::CounterPropagating ? kp + k0 : std::abs(kp - k0);
}

double recoil_velocity(const PhysicalParams& params) {
  return constants::hbar * momentum_transfer(params) / params.m;
}

double leave_time(const PhysicalParams& params) {
  return condensate_width(params) / recoil_velocity(params);
}

ResonanceTerms resonance_detuning(const PhysicalParams& params, double phi0_at_origin) {
  ResonanceTerms t;
  const double k = momentum_transfer(params);
  t.kinetic = constants::hbar * k * k / (2.0 * params.m);
  t.condensate = params.g13 * params.g13 * params.N * phi0_at_origin * phi0_at_origin / params.Delta;
  t.light_shift = params.Omega23 * params.Omega23 / params.Delta;
  t.trap = params.omega_t;
  t.total = t.kinetic + t.condensate - t.light_shift - t.trap;
  return t;
}

double probe_input_amplitude(const PhysicalParams& params, const DetectorSpec& detector) {
  if (!(detector.probe_window > 0)) throw ValidationError("detector.probe_window must be positive");
  return std::sqrt(recoil_velocity(params) / (params.c * detector.probe_window));
}

namespace {

// Effective two-photon rate per unit Omega23 under the chosen reading.
double rate_per_pump(const PhysicalParams& params, const ComplexField& phi0,
                     RabiInterpretation interpretation) {
  const double per_phi = params.kappa * params.g13 * std::sqrt(params.N) / params.Delta;
  double integral = 0;
  for (const auto& z : phi0.values()) integral += z.real();
  integral *= phi0.grid().dx();
  const double sigma = condensate_width(params);
  switch (interpretation) {
    case RabiInterpretation::Peak:
      return per_phi * condensate_peak(params);
    case RabiInterpretation::IntegralOverWidth:
      return per_phi * integral / sigma;
    case RabiInterpretation::TravelingWave:
      return per_phi * integral / sigma * std::sqrt(recoil_velocity(params) / params.c);
  }
  return 0;
}

}  // namespace

double optimal_pump_rabi_estimate(const PhysicalParams& params, const ComplexField& phi0,
                                  RabiInterpretation interpretation) {
  // pi / (2 * rate * Omega23) == T_leave
  return constants::pi / (2.0 * rate_per_pump(params, phi0, interpretation) * leave_time(params));
}

double calibrated_kappa(const PhysicalParams& params, const ComplexField& phi0) {
  PhysicalParams unit = params;
  unit.kappa = 1.0;
  const double estimate = optimal_pump_rabi_estimate(unit, phi0, params.calibration.interpretation);
  return estimate / params.calibration.target_Omega23;
}

std::vector<std::string> validity_warnings(const PhysicalParams& params) {
  std::vector<std::string> out;
  const double k = momentum_transfer(params);
  const double scales[] = {
      std::abs(params.Omega23),
      std::abs(params.g13) * std::sqrt(params.N) * condensate_peak(params),
      constants::hbar * k * k / (2.0 * params.m),
  };
  const char* names[] = {"|Omega23|", "|g13| sqrt(N) phi0(0)", "hbar k^2 / 2m"};
  for (int i = 0; i < 3; ++i) {
    if (params.Delta < 10.0 * scales[i]) {
      std::ostringstream os;
      os << "adiabatic elimination questionable: Delta = " << params.Delta << " is less than 10 x "
         << names[i] << " = " << scales[i];
      out.push_back(os.str());
    }
  }
  return out;
}

Model::Model(PhysicalParams params, Grid grid, DetectorSpec detector)
    : params_(std::move(params)), grid_(grid), detector_(detector) {
  params_.validate();
  grid_.validate();
  detector_.validate(grid_);

  phi0_ = condensate_ground_state(params_, grid_);
  if (params_.calibration.mode == KappaMode::MatchEstimate) {
    params_.kappa = calibrated_kappa(params_, phi0_);
    params_.calibration.mode = KappaMode::Fixed;
  }

  k_ = squeezebeam::momentum_transfer(params_);
  v_ = squeezebeam::recoil_velocity(params_);
  sigma_ = condensate_width(params_);
  // phi0 at x = 0 under the same discrete normalization as the samples.
  {
    double sum = 0;
    for (std::size_t j = 0; j < grid_.n_x; ++j) sum += std::pow(gaussian(grid_.x(j), sigma_), 2);
    phi0_origin_ = 1.0 / std::sqrt(sum * grid_.dx());
  }

  const ComplexField omega = coupling_profile(params_, grid_, phi0_);
  const double u_scale = params_.g13 * params_.g13 * params_.N / params_.Delta;
  const double phi_scale = phi0_origin_;
  coupling_.resize(grid_.n_x);
  potential_.resize(grid_.n_x);
  potential_mid_.resize(grid_.n_x);
  for (std::size_t j = 0; j < grid_.n_x; ++j) {
    coupling_[j] = omega[j].real();
    potential_[j] = u_scale * std::norm(phi0_[j]);
    const double phi_mid = phi_scale * gaussian(grid_.x(j) + 0.5 * grid_.dx(), sigma_);
    potential_mid_[j] = u_scale * phi_mid * phi_mid;
  }

  p_in_ = probe_input_amplitude(params_, detector_);
  resonance_ = resonance_detuning(params_, phi0_origin_);
  warnings_ = validity_warnings(params_);
}

double Model::atom_energy() const noexcept {
  return resonance_.kinetic - resonance_.light_shift - resonance_.trap;
}

double Model::two_photon_detuning() const noexcept {
  return params_.delta_mode == DetuningMode::Offset ? resonance_.total + params_.delta
                                                    : params_.delta;
}

double Model::probe_detuning() const noexcept {
  if (params_.delta_mode == DetuningMode::Offset)
    return params_.delta + resonance_.condensate;
  return params_.delta - atom_energy();
}

double Model::gauge_constant(Gauge gauge) const noexcept {
  switch (gauge.kind) {
    case GaugeKind::LightShift: return -resonance_.light_shift;
    case GaugeKind::Zero: return 0.0;
    case GaugeKind::Resonance: return resonance_.total;
    case GaugeKind::ProbeCarrier: return two_photon_detuning();
    case GaugeKind::Custom: return gauge.value;
  }
  return 0.0;
}

double Model::atom_offset(Gauge gauge) const noexcept {
  // Each branch avoids subtracting the ~1e13 rad/s light shift from itself.
  switch (gauge.kind) {
    case GaugeKind::LightShift: return resonance_.kinetic - resonance_.trap;
    case GaugeKind::Zero: return atom_energy();
    case GaugeKind::Resonance: return -resonance_.condensate;
    case GaugeKind::ProbeCarrier: return -probe_detuning();
    case GaugeKind::Custom: return atom_energy() - gauge.value;
  }
  return 0.0;
}

double Model::carrier_frequency(Gauge gauge) const noexcept {
  switch (gauge.kind) {
    case GaugeKind::LightShift: return atom_offset(gauge) + probe_detuning();
    case GaugeKind::Zero: return two_photon_detuning();
    case GaugeKind::Resonance:
      return params_.delta_mode == DetuningMode::Offset ? params_.delta
                                                        : params_.delta - resonance_.total;
    case GaugeKind::ProbeCarrier: return 0.0;
    case GaugeKind::Custom: return two_photon_detuning() - gauge.value;
  }
  return 0.0;
}

}  // namespace squeezebeam
