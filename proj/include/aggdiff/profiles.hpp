#pragma once

#include "aggdiff/field.hpp"

namespace aggdiff {

/// Centered Gaussian of total mass M: M (2 pi sigma^2)^(-dim/2) exp(-|x-c|^2 / (2 sigma^2)).
/// The center is (center, 0) in 2D.  Requires sigma <= L/16 and a footprint
/// of 8 sigma around the center inside the box.
Field gaussian(const Grid& grid, double mass, double sigma, double center = 0.0);

/// Two Gaussians of mass M/2 each, centered at x1 = +offset and x1 = -offset.
Field gaussian_pair(const Grid& grid, double mass, double sigma, double offset);

/// Largest sample on the outermost layer of cells relative to the largest
/// sample overall.  Zero for a zero field.
double boundary_ratio(const Field& field);

/// Checks of the standing assumptions on initial data, evaluated on samples.
struct Admissibility {
  bool finite = false;
  bool nonnegative = false;
  bool radially_symmetric = false;  // even in each axis, and x1 <-> x2 in 2D
  bool decays = false;              // boundary_ratio below tolerance
  bool positive_mass = false;
  double asymmetry = 0.0;           // max reflection mismatch relative to max |u|
  double boundary = 0.0;

  bool ok() const { return finite && nonnegative && radially_symmetric && decays && positive_mass; }
};

Admissibility check_initial_condition(const Field& field, double symmetry_tol = 1e-12,
                                      double boundary_tol = 1e-12);

/// Maximum of |u(x) - u(R x)| over all axis reflections R, relative to max |u|.
double reflection_asymmetry(const Field& field);

}  // namespace aggdiff
