#include "aggdiff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "fft.hpp"
#include "kernel_detail.hpp"

namespace aggdiff {

double VelocityField::max_magnitude() const {
  double out = 0.0;
  if (grid.dim() == 1) {
    for (double v : components[0]) out = std::max(out, std::abs(v));
  } else {
    for (std::size_t k = 0; k < components[0].size(); ++k)
      out = std::max(out, std::hypot(components[0][k], components[1][k]));
  }
  return out;
}

VelocityField velocity_1d(const Field& field) {
  const Grid& grid = field.grid();
  if (grid.dim() != 1) throw std::invalid_argument("velocity_1d: field is not one-dimensional");
  const double h = grid.spacing();
  const auto u = field.values();

  double total = 0.0;
  for (double v : u) total += v;
  const double mass = h * total;

  std::vector<double> v(u.size());
  double prefix = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    prefix += u[i];
    v[i] = mass - 2.0 * (h * prefix - 0.5 * h * u[i]);
  }
  return VelocityField{grid, {std::move(v), {}}};
}

std::vector<double> face_velocity_1d(const Field& field) {
  const Grid& grid = field.grid();
  if (grid.dim() != 1) throw std::invalid_argument("face_velocity_1d: field is not one-dimensional");
  const double h = grid.spacing();
  const auto u = field.values();
  double total = 0.0;
  for (double v : u) total += v;
  const double mass = h * total;

  std::vector<double> faces(u.size() + 1);
  double prefix = 0.0;
  for (std::size_t i = 0; i <= u.size(); ++i) {
    faces[i] = mass - 2.0 * h * prefix;
    if (i < u.size()) prefix += u[i];
  }
  return faces;
}

namespace {

// Offset of storage index a in {-n/2+1..n/2}.
long wrapped_offset(long a, long n) {
  long o = ((a % n) + n) % n;
  return o > n / 2 ? o - n : o;
}

}  // namespace

namespace detail {

const GradKernelSpectrum& grad_kernel_spectrum(const Grid& grid) {
  thread_local std::map<std::pair<std::size_t, double>, GradKernelSpectrum> cache;
  auto key = std::make_pair(grid.n(), grid.extent());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const std::size_t n = grid.n();
  const auto nl = static_cast<long>(n);
  std::vector<double> g1(n * n), g2(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const long o1 = wrapped_offset(static_cast<long>(a), nl);
      const long o2 = wrapped_offset(static_cast<long>(b), nl);
      if (o1 == 0 && o2 == 0) continue;
      const double r = std::hypot(static_cast<double>(o1), static_cast<double>(o2));
      g1[a * n + b] = o1 == nl / 2 ? 0.0 : -static_cast<double>(o1) / r;
      g2[a * n + b] = o2 == nl / 2 ? 0.0 : -static_cast<double>(o2) / r;
    }
  auto& fft = detail::fft_for(2, n);
  GradKernelSpectrum spec;
  spec.c1.resize(fft.complex_size());
  spec.c2.resize(fft.complex_size());
  fft.forward(g1, spec.c1);
  fft.forward(g2, spec.c2);
  // Fold in h^2 (quadrature weight) and 1/n^2 (inverse normalization).
  const double scale = grid.cell_volume() / static_cast<double>(n * n);
  for (auto& c : spec.c1) c *= scale;
  for (auto& c : spec.c2) c *= scale;
  return cache.emplace(key, std::move(spec)).first->second;
}

}  // namespace detail

VelocityField velocity_2d_spectral(const Field& field) {
  const Grid& grid = field.grid();
  if (grid.dim() != 2) throw std::invalid_argument("velocity_2d_spectral: field is not two-dimensional");
  const auto& kernel = detail::grad_kernel_spectrum(grid);
  auto& fft = detail::fft_for(2, grid.n());

  std::vector<std::complex<double>> u_hat(fft.complex_size()), work(fft.complex_size());
  fft.forward(field.values(), u_hat);

  VelocityField out{grid, {std::vector<double>(grid.cells()), std::vector<double>(grid.cells())}};
  for (std::size_t k = 0; k < work.size(); ++k) work[k] = kernel.c1[k] * u_hat[k];
  fft.inverse(work, out.components[0]);
  for (std::size_t k = 0; k < work.size(); ++k) work[k] = kernel.c2[k] * u_hat[k];
  fft.inverse(work, out.components[1]);
  return out;
}

VelocityField velocity_direct_oracle(const Field& field) {
  const Grid& grid = field.grid();
  if (grid.cells() > 4096) throw std::invalid_argument("velocity_direct_oracle: more than 4096 cells");
  const auto n = static_cast<long>(grid.n());
  const double w = grid.cell_volume();

  if (grid.dim() == 1) {
    std::vector<double> v(grid.cells(), 0.0);
    for (long a = 0; a < n; ++a) {
      double sum = 0.0;
      for (long b = 0; b < n; ++b) {
        const long o = wrapped_offset(a - b, n);
        if (o == 0 || o == n / 2) continue;
        sum += (o > 0 ? -1.0 : 1.0) * field.at(static_cast<std::size_t>(b));
      }
      v[static_cast<std::size_t>(a)] = w * sum;
    }
    return VelocityField{grid, {std::move(v), {}}};
  }

  std::vector<double> v1(grid.cells(), 0.0), v2(grid.cells(), 0.0);
  for (long a1 = 0; a1 < n; ++a1)
    for (long a2 = 0; a2 < n; ++a2) {
      double s1 = 0.0, s2 = 0.0;
      for (long b1 = 0; b1 < n; ++b1)
        for (long b2 = 0; b2 < n; ++b2) {
          const long o1 = wrapped_offset(a1 - b1, n);
          const long o2 = wrapped_offset(a2 - b2, n);
          if (o1 == 0 && o2 == 0) continue;
          const double d1 = static_cast<double>(o1), d2 = static_cast<double>(o2);
          const double r = std::sqrt(d1 * d1 + d2 * d2);
          const double u = field.at(static_cast<std::size_t>(b1), static_cast<std::size_t>(b2));
          if (o1 != n / 2) s1 -= d1 / r * u;
          if (o2 != n / 2) s2 -= d2 / r * u;
        }
      const auto k = static_cast<std::size_t>(a1 * n + a2);
      v1[k] = w * s1;
      v2[k] = w * s2;
    }
  return VelocityField{grid, {std::move(v1), std::move(v2)}};
}

double riesz_origin_average(int dim, double spacing, double lambda) {
  if (!(lambda > 0.0) || !(lambda < dim))
    throw std::invalid_argument("riesz_origin_average: lambda must lie in (0, dim)");
  const double a = 0.5 * spacing;
  if (dim == 1) return std::pow(a, -lambda) / (1.0 - lambda);

  // Eight congruent triangles; radial integral in closed form, angular by Simpson.
  constexpr int intervals = 4096;
  const double upper = 0.25 * std::numbers::pi;
  const double step = upper / intervals;
  auto f = [lambda](double theta) { return std::pow(1.0 / std::cos(theta), 2.0 - lambda); };
  double s = f(0.0) + f(upper);
  for (int k = 1; k < intervals; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * f(k * step);
  const double angular = s * step / 3.0;
  return 8.0 * std::pow(a, 2.0 - lambda) / ((2.0 - lambda) * spacing * spacing) * angular;
}

Field riesz_convolve(const Field& field, double lambda) {
  const Grid& grid = field.grid();
  const int dim = grid.dim();
  if (!(lambda > 0.0) || !(lambda < dim))
    throw std::invalid_argument("riesz_convolve: lambda must lie in (0, dim)");
  const std::size_t n = grid.n();
  const auto nl = static_cast<long>(n);
  const double h = grid.spacing();

  std::vector<double> kernel(grid.cells());
  if (dim == 1) {
    for (std::size_t a = 0; a < n; ++a) {
      const long o = wrapped_offset(static_cast<long>(a), nl);
      kernel[a] = std::pow(std::abs(static_cast<double>(o)) * h, -lambda);
    }
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const double o1 = static_cast<double>(wrapped_offset(static_cast<long>(a), nl));
        const double o2 = static_cast<double>(wrapped_offset(static_cast<long>(b), nl));
        kernel[a * n + b] = std::pow(std::hypot(o1, o2) * h, -lambda);
      }
  }
  kernel[0] = riesz_origin_average(dim, h, lambda);

  auto& fft = detail::fft_for(dim, n);
  std::vector<std::complex<double>> k_hat(fft.complex_size()), u_hat(fft.complex_size());
  fft.forward(kernel, k_hat);
  fft.forward(field.values(), u_hat);
  const double scale = grid.cell_volume() / static_cast<double>(grid.cells());
  for (std::size_t k = 0; k < u_hat.size(); ++k) u_hat[k] *= k_hat[k] * scale;
  std::vector<double> out(grid.cells());
  fft.inverse(u_hat, out);
  return Field(grid, std::move(out));
}

}  // namespace aggdiff
