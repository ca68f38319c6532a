#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace squeezebeam {

using cdouble = std::complex<double>;

/// Uniform periodic grid on [x_min, x_max); the right end is not a sample.
struct Grid {
  double x_min = -0.05e-3;
  double x_max = 0.10e-3;
  std::size_t n_x = 4096;

  double length() const noexcept { return x_max - x_min; }
  double dx() const noexcept { return length() / static_cast<double>(n_x); }
  double x(std::size_t j) const noexcept {
    return x_min + static_cast<double>(j) * dx();
  }

  /// Throws ValidationError when the invariants do not hold.
  void validate() const;

  bool operator==(const Grid&) const = default;
};

/// Complex amplitude sampled on a Grid.
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const Grid& grid, cdouble fill = {})
      : grid_(grid), values_(grid.n_x, fill) {}
  ComplexField(const Grid& grid, std::vector<cdouble> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  cdouble& operator[](std::size_t j) noexcept { return values_[j]; }
  const cdouble& operator[](std::size_t j) const noexcept { return values_[j]; }

  std::span<cdouble> values() noexcept { return values_; }
  std::span<const cdouble> values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  /// Discrete norm sum |f|^2 dx.
  double norm_squared() const noexcept;

  bool operator==(const ComplexField&) const = default;

 private:
  Grid grid_{};
  std::vector<cdouble> values_;
};

}  // namespace squeezebeam
