#include "aggdiff/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace aggdiff {

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cells())
    throw std::invalid_argument("field: expected " + std::to_string(grid_.cells()) +
                                " samples, got " + std::to_string(values_.size()));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite sample");
}

Field::Field(Grid grid) : grid_(grid), values_(grid.cells(), 0.0) {}

Field combine(double a, const Field& f, double b, const Field& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("combine: grid mismatch");
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a * f[k] + b * g[k];
  return Field(f.grid(), std::move(out));
}

Field scaled(const Field& f, double c) {
  std::vector<double> out(f.values().begin(), f.values().end());
  for (double& v : out) v *= c;
  return Field(f.grid(), std::move(out));
}

Field shifted(const Field& f, long cells_x1, long cells_x2) {
  const auto n = static_cast<long>(f.grid().n());
  auto wrap = [n](long i) { return static_cast<std::size_t>(((i % n) + n) % n); };
  std::vector<double> out(f.size());
  if (f.grid().dim() == 1) {
    for (long i = 0; i < n; ++i) out[wrap(i + cells_x1)] = f.at(static_cast<std::size_t>(i));
  } else {
    const auto nu = static_cast<std::size_t>(n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        out[wrap(i + cells_x1) * nu + wrap(j + cells_x2)] =
            f.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return Field(f.grid(), std::move(out));
}

namespace {

// exp(-i k x0) for the first cell center x0 = -L/2 + h/2.
std::complex<double> origin_phase(const Grid& grid, std::size_t i) {
  const double x0 = grid.coordinate(0);
  const double phase = -grid.wavenumber(i) * x0;
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

Spectrum::Spectrum(Grid grid, std::vector<std::complex<double>> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  const std::size_t expected = grid_.dim() == 1 ? half() : grid_.n() * half();
  if (coeffs_.size() != expected)
    throw std::invalid_argument("spectrum: expected " + std::to_string(expected) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
}

std::complex<double> Spectrum::at(long j1) const {
  const auto n = static_cast<long>(grid_.n());
  if (grid_.dim() != 1) throw std::invalid_argument("spectrum: 1D index on 2D spectrum");
  if (j1 <= -n / 2 || j1 > n / 2) throw std::out_of_range("spectrum: index outside {-n/2+1..n/2}");
  if (j1 >= 0) return coeffs_[static_cast<std::size_t>(j1)];
  return std::conj(coeffs_[static_cast<std::size_t>(-j1)]);
}

std::complex<double> Spectrum::at(long j1, long j2) const {
  const auto n = static_cast<long>(grid_.n());
  if (grid_.dim() != 2) throw std::invalid_argument("spectrum: 2D index on 1D spectrum");
  if (j1 <= -n / 2 || j1 > n / 2 || j2 <= -n / 2 || j2 > n / 2)
    throw std::out_of_range("spectrum: index outside {-n/2+1..n/2}");
  if (j2 < 0) {
    // Row -j1 for j1 = n/2 aliases onto the Nyquist row itself.
    const long r = j1 == n / 2 ? n / 2 : -j1;
    return std::conj(at(r, -j2));
  }
  const auto row = static_cast<std::size_t>((j1 + n) % n);
  return coeffs_[row * half() + static_cast<std::size_t>(j2)];
}

Spectrum forward(const Field& field) {
  const Grid& grid = field.grid();
  auto& fft = detail::fft_for(grid.dim(), grid.n());
  std::vector<std::complex<double>> coeffs(fft.complex_size());
  fft.forward(field.values(), coeffs);
  const double volume = grid.cell_volume();
  const std::size_t half = grid.n() / 2 + 1;
  if (grid.dim() == 1) {
    for (std::size_t j = 0; j < half; ++j) coeffs[j] *= volume * origin_phase(grid, j);
  } else {
    for (std::size_t i = 0; i < grid.n(); ++i) {
      const auto row_phase = origin_phase(grid, i);
      for (std::size_t j = 0; j < half; ++j)
        coeffs[i * half + j] *= volume * row_phase * origin_phase(grid, j);
    }
  }
  return Spectrum(grid, std::move(coeffs));
}

Field inverse(const Spectrum& spectrum) {
  const Grid& grid = spectrum.grid();
  auto& fft = detail::fft_for(grid.dim(), grid.n());
  std::vector<std::complex<double>> raw(spectrum.coeffs().begin(), spectrum.coeffs().end());
  const double scale = 1.0 / (grid.cell_volume() * static_cast<double>(grid.cells()));
  const std::size_t half = spectrum.half();
  if (grid.dim() == 1) {
    for (std::size_t j = 0; j < half; ++j) raw[j] *= scale * std::conj(origin_phase(grid, j));
  } else {
    for (std::size_t i = 0; i < grid.n(); ++i) {
      const auto row_phase = std::conj(origin_phase(grid, i));
      for (std::size_t j = 0; j < half; ++j)
        raw[i * half + j] *= scale * row_phase * std::conj(origin_phase(grid, j));
    }
  }
  std::vector<double> values(grid.cells());
  fft.inverse(raw, values);
  return Field(grid, std::move(values));
}

Field spectral_derivative(const Field& field, const Multiindex& index, int max_order) {
  const Grid& grid = field.grid();
  if (index[0] < 0 || index[1] < 0) throw std::invalid_argument("spectral_derivative: negative order");
  const int order = grid.dim() == 1 ? index[0] : total_order(index);
  if (order > max_order)
    throw std::invalid_argument("spectral_derivative: order " + std::to_string(order) +
                                " exceeds maximum " + std::to_string(max_order));
  if (order == 0) return field;

  auto& fft = detail::fft_for(grid.dim(), grid.n());
  std::vector<std::complex<double>> coeffs(fft.complex_size());
  fft.forward(field.values(), coeffs);

  const std::size_t n = grid.n();
  const std::size_t half = n / 2 + 1;
  const double norm = 1.0 / static_cast<double>(grid.cells());
  // (i k)^a for one axis; zero at Nyquist when a is odd.
  auto factor = [&](std::size_t storage, int a) -> std::complex<double> {
    if (a == 0) return 1.0;
    if ((a % 2) == 1 && storage == n / 2) return 0.0;
    const std::complex<double> ik(0.0, grid.wavenumber(storage));
    std::complex<double> out = 1.0;
    for (int r = 0; r < a; ++r) out *= ik;
    return out;
  };
  if (grid.dim() == 1) {
    for (std::size_t j = 0; j < half; ++j) coeffs[j] *= norm * factor(j, index[0]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto f1 = factor(i, index[0]);
      for (std::size_t j = 0; j < half; ++j) coeffs[i * half + j] *= norm * f1 * factor(j, index[1]);
    }
  }
  std::vector<double> values(grid.cells());
  fft.inverse(coeffs, values);
  return Field(grid, std::move(values));
}

}  // namespace aggdiff
