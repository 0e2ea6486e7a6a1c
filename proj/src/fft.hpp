#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace aggdiff::detail {

/// Unnormalized real-to-half-complex transforms on an n or n x n lattice.
/// Owns aligned buffers so every execution uses the same codelets, which
/// keeps results bit-reproducible.
class RealFft {
 public:
  RealFft(int dim, std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t real_size() const { return real_size_; }
  std::size_t complex_size() const { return complex_size_; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out);

  /// Destroys nothing: the input is copied into the work buffer first.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  std::size_t real_size_;
  std::size_t complex_size_;
  double* real_ = nullptr;
  fftw_complex* complex_ = nullptr;
  fftw_plan forward_plan_ = nullptr;
  fftw_plan inverse_plan_ = nullptr;
};

/// Per-thread transform for the given shape; created on first use.
RealFft& fft_for(int dim, std::size_t n);

}  // namespace aggdiff::detail
