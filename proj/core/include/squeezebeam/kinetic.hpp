#pragma once

#include <memory>
#include <span>

#include "squeezebeam/field.hpp"

namespace squeezebeam {

enum class DerivativeScheme { Spectral, FiniteDifference4 };

/// Periodic-grid operator T = -(hbar/2m) d^2/dx^2 - i v d/dx acting on the
/// momentum-shifted atomic field.
///
/// Each instance owns its transform buffers, so one instance must not be
/// used from two threads at once. Separate instances are independent.
class KineticOperator {
 public:
  KineticOperator(const Grid& grid, double hbar_over_m, double drift_velocity,
                  DerivativeScheme scheme);
  ~KineticOperator();
  KineticOperator(KineticOperator&&) noexcept;
  KineticOperator& operator=(KineticOperator&&) noexcept;
  KineticOperator(const KineticOperator&) = delete;
  KineticOperator& operator=(const KineticOperator&) = delete;

  /// out = T in. `in` and `out` may alias.
  void apply(std::span<const cdouble> in, std::span<cdouble> out);

  /// Eigenvalue of T for the Fourier mode exp(i q x) (spectral scheme) or
  /// its finite-difference symbol.
  double symbol(double q) const noexcept;

  /// Largest |symbol| over the resolved wavenumbers.
  double spectral_radius() const noexcept;

  DerivativeScheme scheme() const noexcept { return scheme_; }

 private:
  struct Transform;
  Grid grid_;
  double half_hbar_over_m_;
  double drift_;
  DerivativeScheme scheme_;
  std::unique_ptr<Transform> fft_;
};

/// 4th-order centred first derivative on a periodic grid.
void periodic_gradient(std::span<const cdouble> f, double dx, std::span<cdouble> out);

}  // namespace squeezebeam
