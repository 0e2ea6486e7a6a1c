#pragma once

#include <array>
#include <vector>

#include "aggdiff/field.hpp"

namespace aggdiff {

/// Samples of grad K * u for K(x) = -|x|.  Only the first dim components
/// are populated.
struct VelocityField {
  Grid grid;
  std::array<std::vector<double>, 2> components;

  double max_magnitude() const;
};

/// 1D velocity from the cumulative mass: v_i = M - 2 (h sum_{l<=i} u_l - h u_i / 2).
/// Exact for the line kernel restricted to the box; no FFT.
VelocityField velocity_1d(const Field& field);

/// Velocity on the n+1 cell faces, v_{i-1/2} = M - 2 h sum_{l<i} u_l, i = 0..n.
std::vector<double> face_velocity_1d(const Field& field);

/// Periodized FFT convolution of u with the sampled grad K (zero at the
/// origin cell; antisymmetric components vanish at the half-period offset).
VelocityField velocity_2d_spectral(const Field& field);

/// Direct O(cells^2) periodized convolution with the same sampling
/// conventions.  Limited to 4096 cells.
VelocityField velocity_direct_oracle(const Field& field);

/// |x|^-lambda * u as a periodized FFT convolution.  The singular origin cell
/// takes the cell average of |x|^-lambda.
Field riesz_convolve(const Field& field, double lambda);

/// Average of |x|^-lambda over the origin cell [-h/2, h/2]^dim.
double riesz_origin_average(int dim, double spacing, double lambda);

}  // namespace aggdiff
