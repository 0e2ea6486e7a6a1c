#include "aggdiff/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aggdiff {

Field gaussian(const Grid& grid, double mass, double sigma, double center) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("gaussian: mass must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be positive");
  if (sigma > grid.extent() / 16.0)
    throw std::invalid_argument("gaussian: sigma exceeds L/16; periodization error would be visible");
  if (std::abs(center) + 8.0 * sigma > 0.5 * grid.extent() * (1.0 + 1e-12))
    throw std::invalid_argument("gaussian: bump of 8 sigma around the center leaves the box");

  const int dim = grid.dim();
  const double peak = mass * std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * dim);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  return sample(grid, [&](double x1, double x2) {
    const double dx = x1 - center;
    const double r2 = dim == 1 ? dx * dx : dx * dx + x2 * x2;
    return peak * std::exp(-r2 * inv);
  });
}

Field gaussian_pair(const Grid& grid, double mass, double sigma, double offset) {
  return combine(1.0, gaussian(grid, 0.5 * mass, sigma, offset), 1.0,
                 gaussian(grid, 0.5 * mass, sigma, -offset));
}

double boundary_ratio(const Field& field) {
  const Grid& grid = field.grid();
  const auto values = field.values();
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;

  const std::size_t n = grid.n();
  double edge = 0.0;
  if (grid.dim() == 1) {
    edge = std::max(std::abs(values[0]), std::abs(values[n - 1]));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      edge = std::max({edge, std::abs(field.at(0, k)), std::abs(field.at(n - 1, k)),
                       std::abs(field.at(k, 0)), std::abs(field.at(k, n - 1))});
    }
  }
  return edge / peak;
}

double reflection_asymmetry(const Field& field) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.n();
  double peak = 0.0;
  for (double v : field.values()) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;

  // Cell i mirrors onto n-1-i under x -> -x.
  double worst = 0.0;
  if (grid.dim() == 1) {
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(field.at(i) - field.at(n - 1 - i)));
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double u = field.at(i, j);
        worst = std::max({worst, std::abs(u - field.at(n - 1 - i, j)),
                          std::abs(u - field.at(i, n - 1 - j))});
      }
  }
  return worst / peak;
}

Admissibility check_initial_condition(const Field& field, double symmetry_tol, double boundary_tol) {
  Admissibility out;
  const auto values = field.values();
  out.finite = std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
  out.nonnegative = std::all_of(values.begin(), values.end(), [](double v) { return v >= 0.0; });

  double total = 0.0;
  for (double v : values) total += v;
  out.positive_mass = total > 0.0;

  out.asymmetry = reflection_asymmetry(field);
  if (field.grid().dim() == 2) {
    const std::size_t n = field.grid().n();
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          out.asymmetry = std::max(out.asymmetry, std::abs(field.at(i, j) - field.at(j, i)) / peak);
  }
  out.radially_symmetric = out.asymmetry <= symmetry_tol;

  out.boundary = boundary_ratio(field);
  out.decays = out.boundary <= boundary_tol;
  return out;
}

}  // namespace aggdiff
