#pragma once

#include <complex>
#include <cstddef>
#include <variant>

namespace squeezebeam {

struct FockState {
  unsigned n = 0;
  bool operator==(const FockState&) const = default;
};

struct CoherentState {
  std::complex<double> alpha{};
  bool operator==(const CoherentState&) const = default;
};

/// D(alpha) S(r e^{i theta}) |0>.
struct SqueezedCoherentState {
  std::complex<double> alpha{};
  double r = 0.0;
  double theta = 0.0;
  bool operator==(const SqueezedCoherentState&) const = default;
};

struct DirectMoments {
  double n_bar = 0.0;
  double bdag2b2 = 0.0;
  bool operator==(const DirectMoments&) const = default;
};

/// State of the single occupied probe mode b0.
using OpticalStateSpec = std::variant<FockState, CoherentState, SqueezedCoherentState, DirectMoments>;

/// <b^dag b> and <b^dag b^dag b b>.
struct OpticalMoments {
  double n_bar = 0.0;
  double bdag2b2 = 0.0;
};

void validate(const OpticalStateSpec& spec);

/// Closed-form number moments.
OpticalMoments optical_moments(const OpticalStateSpec& spec);

/// Number moments from an explicit state vector in a Fock space of the given
/// dimension, built by exponentiating the truncated squeeze and displacement
/// generators. Throws TruncationError if more than 1e-10 of the probability
/// sits in the top quarter of the basis. DirectMoments cannot be represented
/// and throw ValidationError.
OpticalMoments truncated_fock_moments(const OpticalStateSpec& spec, std::size_t dimension);

/// Normalized variance v(N0) = (<b^dag2 b^2> - n_bar^2) / n_bar + 1.
double fano(const OpticalMoments& moments);

}  // namespace squeezebeam
