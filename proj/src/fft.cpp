#include "fft.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>

namespace aggdiff::detail {

namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}
}  // namespace

RealFft::RealFft(int dim, std::size_t n) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("RealFft: dim must be 1 or 2");
  const std::size_t half = n / 2 + 1;
  real_size_ = dim == 1 ? n : n * n;
  complex_size_ = dim == 1 ? half : n * half;

  std::lock_guard lock(planner_mutex());
  real_ = fftw_alloc_real(real_size_);
  complex_ = fftw_alloc_complex(complex_size_);
  if (real_ == nullptr || complex_ == nullptr) {
    fftw_free(real_);
    fftw_free(complex_);
    throw std::bad_alloc();
  }
  const int ni = static_cast<int>(n);
  if (dim == 1) {
    forward_plan_ = fftw_plan_dft_r2c_1d(ni, real_, complex_, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_1d(ni, complex_, real_, FFTW_ESTIMATE);
  } else {
    forward_plan_ = fftw_plan_dft_r2c_2d(ni, ni, real_, complex_, FFTW_ESTIMATE);
    inverse_plan_ = fftw_plan_dft_c2r_2d(ni, ni, complex_, real_, FFTW_ESTIMATE);
  }
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(forward_plan_);
  fftw_destroy_plan(inverse_plan_);
  fftw_free(real_);
  fftw_free(complex_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), real_);
  fftw_execute(forward_plan_);
  std::memcpy(static_cast<void*>(out.data()), complex_, complex_size_ * sizeof(fftw_complex));
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  std::memcpy(complex_, static_cast<const void*>(in.data()), complex_size_ * sizeof(fftw_complex));
  fftw_execute(inverse_plan_);
  std::copy(real_, real_ + real_size_, out.begin());
}

RealFft& fft_for(int dim, std::size_t n) {
  thread_local std::map<std::pair<int, std::size_t>, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[{dim, n}];
  if (!slot) slot = std::make_unique<RealFft>(dim, n);
  return *slot;
}

}  // namespace aggdiff::detail
