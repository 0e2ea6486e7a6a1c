#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace aggdiff {

/// Uniform periodic lattice on the centered box [-L/2, L/2)^dim.
///
/// Samples are cell-centered: along every axis the i-th cell center sits at
/// x_i = -L/2 + (i + 1/2) h.  Multi-dimensional data is stored row-major with
/// the first axis slowest.
class Grid {
 public:
  Grid(int dim, std::size_t n, double extent);

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return spacing_; }
  std::size_t cells() const { return dim_ == 1 ? n_ : n_ * n_; }
  double cell_volume() const { return dim_ == 1 ? spacing_ : spacing_ * spacing_; }

  /// Cell-center coordinate along one axis.
  double coordinate(std::size_t i) const {
    return -0.5 * extent_ + (static_cast<double>(i) + 0.5) * spacing_;
  }

  /// Signed FFT index for storage index i: j in {-n/2+1, ..., n/2}.
  long signed_index(std::size_t i) const {
    const auto half = static_cast<long>(n_ / 2);
    const auto ii = static_cast<long>(i);
    return ii <= half ? ii : ii - static_cast<long>(n_);
  }

  /// k_j = 2 pi j / L for storage index i.
  double wavenumber(std::size_t i) const;

  /// Wavenumbers in FFT storage order.
  std::vector<double> wavenumbers() const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  std::size_t n_;
  double extent_;
  double spacing_;
};

Grid make_grid(int dim, std::size_t n, double extent);

bool is_power_of_two(std::size_t n);

/// Orders of partial differentiation along (x1, x2).  The second entry is
/// ignored on 1D grids.
using Multiindex = std::array<int, 2>;

inline int total_order(const Multiindex& index) { return index[0] + index[1]; }

/// All multiindices of total order m on a grid of the given dimension.
std::vector<Multiindex> multiindices(int dim, int m);

}  // namespace aggdiff
