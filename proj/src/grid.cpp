#include "aggdiff/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace aggdiff {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(int dim, std::size_t n, double extent) : dim_(dim), n_(n), extent_(extent) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (n < 8 || !is_power_of_two(n))
    throw std::invalid_argument("grid: n must be a power of two >= 8, got " + std::to_string(n));
  if (!std::isfinite(extent) || extent <= 0.0)
    throw std::invalid_argument("grid: extent L must be finite and positive");
  spacing_ = extent / static_cast<double>(n);
}

double Grid::wavenumber(std::size_t i) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(i)) / extent_;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(n_);
  for (std::size_t i = 0; i < n_; ++i) k[i] = wavenumber(i);
  return k;
}

Grid make_grid(int dim, std::size_t n, double extent) { return Grid(dim, n, extent); }

std::vector<Multiindex> multiindices(int dim, int m) {
  if (m < 0) throw std::invalid_argument("multiindices: negative order");
  if (dim == 1) return {Multiindex{m, 0}};
  std::vector<Multiindex> out;
  for (int a = m; a >= 0; --a) out.push_back({a, m - a});
  return out;
}

}  // namespace aggdiff
