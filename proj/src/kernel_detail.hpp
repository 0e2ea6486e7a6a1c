#pragma once

#include <complex>
#include <vector>

#include "aggdiff/grid.hpp"

namespace aggdiff::detail {

/// Half spectra of the two sampled grad K components, pre-scaled by
/// h^2 / n^2 so that v = inverse_raw(c * forward_raw(u)).
struct GradKernelSpectrum {
  std::vector<std::complex<double>> c1, c2;
};

/// Per-thread cache keyed by (n, L).
const GradKernelSpectrum& grad_kernel_spectrum(const Grid& grid);

}  // namespace aggdiff::detail
