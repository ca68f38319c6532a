#pragma once

#include <string>
#include <vector>

#include "squeezebeam/dynamics.hpp"
#include "squeezebeam/field.hpp"
#include "squeezebeam/model.hpp"
#include "squeezebeam/optics.hpp"

namespace squeezebeam {

/// Detector number statistics for a given probe input state.
struct BeamStatistics {
  double N_g = 0;     // detector fraction, atoms per input photon
  double mean_N = 0;  // <N>
  double var_N = 0;   // V(N)
  double v = 1;       // V(N) / <N>
  double v_fock = 1;  // 1 - N_g
};

/// Atom and photon number densities, |g|^2 <b^dag b> and |p|^2 <b^dag b>.
struct Densities {
  std::vector<double> atom;
  std::vector<double> photon;
};

Densities densities(const ModePairState& state, const OpticalMoments& moments);

/// Integral of |g|^2 over [x1, x2]: trapezoid rule on the grid, with the
/// partial cells at each end integrated over the linear interpolant.
double detector_fraction(const ComplexField& g_tilde, const DetectorSpec& detector);

BeamStatistics beam_statistics(double N_g, const OpticalMoments& moments);

/// |p(x_min)|^2 / |p(x_max)|^2, capped at 1e12.
double attenuation_factor(const ModePairState& state);
inline constexpr double kAttenuationCap = 1e12;

struct CommutatorResidual {
  std::vector<double> atomic;  // 1 - |g|^2 * probe_window
  std::vector<double> probe;   // 1 - |p|^2 / p_in^2
  double min() const noexcept;
};

CommutatorResidual commutator_residual(const ModePairState& state, const Model& model);

/// Lab-frame atomic probability current at x, in units of the incoming
/// photon flux c p_in^2. Linear interpolation between grid points.
double detector_current(const ModePairState& state, const Model& model, double x);

/// Warning text when N_g exceeds 1 by more than 1e-3, empty otherwise.
std::string detector_fraction_warning(double N_g, double t);

}  // namespace squeezebeam
