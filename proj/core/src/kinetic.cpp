#include "squeezebeam/kinetic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "squeezebeam/constants.hpp"
#include "squeezebeam/error.hpp"

namespace squeezebeam {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double wavenumber(std::size_t j, std::size_t n, double length) {
  const auto jj = static_cast<double>(j);
  const auto nn = static_cast<double>(n);
  const double shifted = (j <= n / 2) ? jj : jj - nn;
  return 2.0 * constants::pi * shifted / length;
}

}  // namespace

struct KineticOperator::Transform {
  std::size_t n;
  fftw_complex* buffer;
  fftw_plan forward;
  fftw_plan backward;
  std::vector<double> multiplier;  // symbol / n

  explicit Transform(std::size_t size) : n(size) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(n);
    // FFTW_ESTIMATE keeps the algorithm choice, and hence the rounding,
    // identical from run to run.
    forward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Transform() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;
};

KineticOperator::KineticOperator(const Grid& grid, double hbar_over_m, double drift_velocity,
                                 DerivativeScheme scheme)
    : grid_(grid), half_hbar_over_m_(0.5 * hbar_over_m), drift_(drift_velocity), scheme_(scheme) {
  grid_.validate();
  if (scheme_ == DerivativeScheme::Spectral) {
    fft_ = std::make_unique<Transform>(grid_.n_x);
    fft_->multiplier.resize(grid_.n_x);
    for (std::size_t j = 0; j < grid_.n_x; ++j) {
      const double q = wavenumber(j, grid_.n_x, grid_.length());
      fft_->multiplier[j] = symbol(q) / static_cast<double>(grid_.n_x);
    }
    // The Nyquist mode has no well-defined first derivative; drop its drift.
    if (grid_.n_x % 2 == 0) {
      const double q = wavenumber(grid_.n_x / 2, grid_.n_x, grid_.length());
      fft_->multiplier[grid_.n_x / 2] = half_hbar_over_m_ * q * q / static_cast<double>(grid_.n_x);
    }
  }
}

KineticOperator::~KineticOperator() = default;
KineticOperator::KineticOperator(KineticOperator&&) noexcept = default;
KineticOperator& KineticOperator::operator=(KineticOperator&&) noexcept = default;

double KineticOperator::symbol(double q) const noexcept {
  if (scheme_ == DerivativeScheme::Spectral) return half_hbar_over_m_ * q * q + drift_ * q;
  const double h = grid_.dx();
  const double s = q * h;
  // -(d2) symbol: (30 - 32 cos s + 2 cos 2s) / (12 h^2); d1 symbol: i (8 sin s - sin 2s) / (6 h)
  const double second = (30.0 - 32.0 * std::cos(s) + 2.0 * std::cos(2.0 * s)) / (12.0 * h * h);
  const double first = (8.0 * std::sin(s) - std::sin(2.0 * s)) / (6.0 * h);
  return half_hbar_over_m_ * second + drift_ * first;
}

double KineticOperator::spectral_radius() const noexcept {
  double r = 0;
  for (std::size_t j = 0; j < grid_.n_x; ++j)
    r = std::max(r, std::abs(symbol(wavenumber(j, grid_.n_x, grid_.length()))));
  return r;
}

void KineticOperator::apply(std::span<const cdouble> in, std::span<cdouble> out) {
  const std::size_t n = grid_.n_x;
  if (in.size() != n || out.size() != n) throw ValidationError("kinetic operator size mismatch");

  if (scheme_ == DerivativeScheme::Spectral) {
    auto* buf = reinterpret_cast<cdouble*>(fft_->buffer);
    std::copy(in.begin(), in.end(), buf);
    fftw_execute(fft_->forward);
    for (std::size_t j = 0; j < n; ++j) buf[j] *= fft_->multiplier[j];
    fftw_execute(fft_->backward);
    std::copy(buf, buf + n, out.begin());
    return;
  }

  const double h = grid_.dx();
  const double c2 = -half_hbar_over_m_ / (12.0 * h * h);
  const cdouble c1 = cdouble(0.0, -drift_ / (12.0 * h));
  std::vector<cdouble> result(n);
  auto at = [&](std::ptrdiff_t j) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return in[static_cast<std::size_t>(((j % nn) + nn) % nn)];
  };
  for (std::size_t j = 0; j < n; ++j) {
    const auto i = static_cast<std::ptrdiff_t>(j);
    const cdouble fm2 = at(i - 2), fm1 = at(i - 1), f0 = in[j], fp1 = at(i + 1), fp2 = at(i + 2);
    const cdouble d2 = -fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2;
    const cdouble d1 = fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2;
    result[j] = c2 * d2 + c1 * d1;
  }
  std::copy(result.begin(), result.end(), out.begin());
}

void periodic_gradient(std::span<const cdouble> f, double dx, std::span<cdouble> out) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  auto at = [&](std::ptrdiff_t j) { return f[static_cast<std::size_t>(((j % n) + n) % n)]; };
  std::vector<cdouble> result(f.size());
  for (std::ptrdiff_t j = 0; j < n; ++j)
    result[static_cast<std::size_t>(j)] =
        (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * dx);
  std::copy(result.begin(), result.end(), out.begin());
}

}  // namespace squeezebeam
