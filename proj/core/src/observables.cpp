#include "squeezebeam/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "squeezebeam/constants.hpp"
#include "squeezebeam/error.hpp"
#include "squeezebeam/kinetic.hpp"

namespace squeezebeam {

Densities densities(const ModePairState& state, const OpticalMoments& moments) {
  if (!(moments.n_bar >= 0)) throw ValidationError("mean photon number must be >= 0");
  Densities d;
  d.atom.resize(state.g_tilde.size());
  d.photon.resize(state.p_tilde.size());
  for (std::size_t j = 0; j < d.atom.size(); ++j) d.atom[j] = std::norm(state.g_tilde[j]) * moments.n_bar;
  for (std::size_t j = 0; j < d.photon.size(); ++j)
    d.photon[j] = std::norm(state.p_tilde[j]) * moments.n_bar;
  return d;
}

double detector_fraction(const ComplexField& g_tilde, const DetectorSpec& detector) {
  const Grid& grid = g_tilde.grid();
  const double dx = grid.dx();
  const std::size_t n = g_tilde.size();
  auto density = [&](std::size_t j) { return std::norm(g_tilde[std::min(j, n - 1)]); };
  // Interpolated density at fractional position s in cell j.
  auto at = [&](std::size_t j, double s) { return (1.0 - s) * density(j) + s * density(j + 1); };

  const double u1 = (detector.x1 - grid.x_min) / dx;
  const double u2 = (detector.x2 - grid.x_min) / dx;
  if (!(u2 > u1)) return 0.0;
  const auto j1 = static_cast<std::size_t>(std::floor(u1));
  const auto j2 = static_cast<std::size_t>(std::floor(u2));
  const double s1 = u1 - static_cast<double>(j1);
  const double s2 = u2 - static_cast<double>(j2);

  if (j1 == j2) return 0.5 * (at(j1, s1) + at(j1, s2)) * (s2 - s1) * dx;

  double sum = 0.5 * (at(j1, s1) + density(j1 + 1)) * (1.0 - s1);
  for (std::size_t j = j1 + 1; j < j2; ++j) sum += 0.5 * (density(j) + density(j + 1));
  if (s2 > 0) sum += 0.5 * (density(j2) + at(j2, s2)) * s2;
  return sum * dx;
}

BeamStatistics beam_statistics(double N_g, const OpticalMoments& moments) {
  if (!(N_g >= 0) || !std::isfinite(N_g)) throw ValidationError("N_g must be finite and >= 0");
  const double v0 = fano(moments);
  BeamStatistics s;
  s.N_g = N_g;
  s.mean_N = N_g * moments.n_bar;
  s.var_N = N_g * N_g * (moments.bdag2b2 - moments.n_bar * moments.n_bar) + N_g * moments.n_bar;
  s.v = N_g * v0 + (1.0 - N_g);
  s.v_fock = 1.0 - N_g;
  return s;
}

double attenuation_factor(const ModePairState& state) {
  const std::size_t n = state.p_tilde.size();
  if (n == 0) return 1.0;
  const double left = std::norm(state.p_tilde[0]);
  const double right = std::norm(state.p_tilde[n - 1]);
  if (left == 0.0) return 1.0;
  if (right * kAttenuationCap <= left) return kAttenuationCap;
  return left / right;
}

double CommutatorResidual::min() const noexcept {
  double m = std::numeric_limits<double>::infinity();
  for (double r : atomic) m = std::min(m, r);
  for (double r : probe) m = std::min(m, r);
  return m;
}

CommutatorResidual commutator_residual(const ModePairState& state, const Model& model) {
  CommutatorResidual r;
  const double window = model.detector().probe_window;
  const double pin2 = model.probe_amplitude() * model.probe_amplitude();
  r.atomic.resize(state.g_tilde.size());
  r.probe.resize(state.p_tilde.size());
  for (std::size_t j = 0; j < r.atomic.size(); ++j)
    r.atomic[j] = 1.0 - std::norm(state.g_tilde[j]) * window;
  for (std::size_t j = 0; j < r.probe.size(); ++j) r.probe[j] = 1.0 - std::norm(state.p_tilde[j]) / pin2;
  return r;
}

double detector_current(const ModePairState& state, const Model& model, double x) {
  const Grid& grid = model.grid();
  const std::size_t n = grid.n_x;
  std::vector<cdouble> grad(n);
  periodic_gradient(state.g_tilde.values(), grid.dx(), grad);
  // g = g_tilde exp(ikx): J = v |g_tilde|^2 + (hbar/m) Im(g_tilde^* d g_tilde/dx)
  auto current = [&](std::size_t j) {
    const cdouble g = state.g_tilde[j];
    return model.recoil_velocity() * std::norm(g) + model.hbar_over_m() * std::imag(std::conj(g) * grad[j]);
  };
  const double u = std::clamp((x - grid.x_min) / grid.dx(), 0.0, static_cast<double>(n - 1));
  const auto j = std::min(static_cast<std::size_t>(u), n - 2);
  const double s = u - static_cast<double>(j);
  return ((1.0 - s) * current(j) + s * current(j + 1)) / model.probe_flux();
}

std::string detector_fraction_warning(double N_g, double t) {
  if (N_g <= 1.0 + 1e-3) return {};
  std::ostringstream os;
  os << "detector fraction N_g = " << N_g << " exceeds 1 at t = " << t << " s";
  return os.str();
}

}  // namespace squeezebeam
