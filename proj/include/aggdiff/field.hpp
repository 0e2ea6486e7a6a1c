#pragma once

#include <complex>
#include <span>
#include <vector>

#include "aggdiff/grid.hpp"

namespace aggdiff {

/// Real samples of a density on a Grid.  Immutable once constructed.
class Field {
 public:
  Field(Grid grid, std::vector<double> values);

  /// Zero field on the grid.
  explicit Field(Grid grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t k) const { return values_[k]; }
  double at(std::size_t i) const { return values_[i]; }
  double at(std::size_t i, std::size_t j) const { return values_[i * grid_.n() + j]; }

  /// Moves the samples out, leaving the field empty.
  std::vector<double> release() && { return std::move(values_); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// a * f + b * g on a common grid.
Field combine(double a, const Field& f, double b, const Field& g);

/// Field with every sample multiplied by c.
Field scaled(const Field& f, double c);

/// Circular shift by whole cells along each axis (periodic translation).
Field shifted(const Field& f, long cells_x1, long cells_x2 = 0);

/// Samples func at cell centers.  func receives (x1) in 1D and (x1, x2) in 2D.
template <typename Func>
Field sample(const Grid& grid, Func&& func) {
  std::vector<double> values(grid.cells());
  if (grid.dim() == 1) {
    for (std::size_t i = 0; i < grid.n(); ++i) values[i] = func(grid.coordinate(i), 0.0);
  } else {
    const std::size_t n = grid.n();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        values[i * n + j] = func(grid.coordinate(i), grid.coordinate(j));
  }
  return Field(grid, std::move(values));
}

/// Discrete Fourier transform of a real field, stored as the non-redundant
/// half spectrum: the last axis keeps storage indices 0..n/2.
///
/// Convention: u_hat(k) = h^dim * sum_x u(x) exp(-i k.x) with x the physical
/// cell-center coordinates, so discrete norms carry no stray factors.
class Spectrum {
 public:
  Spectrum(Grid grid, std::vector<std::complex<double>> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

  /// Number of stored columns along the last axis (n/2 + 1).
  std::size_t half() const { return grid_.n() / 2 + 1; }

  /// Coefficient for signed indices (j1) or (j1, j2), each in {-n/2+1..n/2}.
  /// Indices outside the stored half are recovered by conjugate symmetry.
  std::complex<double> at(long j1) const;
  std::complex<double> at(long j1, long j2) const;

 private:
  Grid grid_;
  std::vector<std::complex<double>> coeffs_;
};

Spectrum forward(const Field& field);
Field inverse(const Spectrum& spectrum);

/// Partial derivative d^index u computed spectrally.  The Nyquist mode along
/// an axis is zeroed whenever that axis is differentiated an odd number of
/// times.
Field spectral_derivative(const Field& field, const Multiindex& index, int max_order = 4);

}  // namespace aggdiff
