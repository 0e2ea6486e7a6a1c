#include <doctest.h>

#include <cmath>
#include <random>

#include "aggdiff/kernel.hpp"
#include "aggdiff/norms.hpp"
#include "aggdiff/profiles.hpp"
#include "oracles.hpp"

using namespace aggdiff;

namespace {

Field random_nonnegative(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<double> v(grid.cells());
  for (double& x : v) x = dist(rng);
  return Field(grid, std::move(v));
}

double rel_max(const std::vector<double>& ref, std::span<const double> got) {
  return oracle::max_abs_diff(ref, got) / oracle::max_abs(ref);
}

}  // namespace

TEST_CASE("1D velocity matches direct quadrature") {
  const Grid g = make_grid(1, 256, 8.0);
  const Field u = gaussian(g, 1.0, 0.25);
  const VelocityField v = velocity_1d(u);
  CHECK(rel_max(oracle::velocity_1d_direct(u), v.components[0]) <= 1e-12);

  // Far right of a narrow bump the velocity approaches -M, far left +M.
  CHECK(v.components[0][g.n() - 1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(v.components[0][0] == doctest::Approx(1.0).epsilon(1e-10));
  // Even data: odd velocity.
  for (std::size_t i = 0; i < g.n(); ++i)
    CHECK(std::abs(v.components[0][i] + v.components[0][g.n() - 1 - i]) <= 1e-12);

  const auto faces = face_velocity_1d(u);
  REQUIRE(faces.size() == g.n() + 1);
  CHECK(faces.front() == doctest::Approx(1.0));
  CHECK(faces.back() == doctest::Approx(-1.0));
}

TEST_CASE("zero field gives zero velocity") {
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, 16, 4.0);
    const Field z(g);
    const VelocityField v = dim == 1 ? velocity_1d(z) : velocity_2d_spectral(z);
    CHECK(v.max_magnitude() == 0.0);
    CHECK(oracle::max_abs(riesz_convolve(z, 0.5).values()) == 0.0);
  }
}

TEST_CASE("1D velocity derivative is -2u to first order") {
  double prev = 0.0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const Grid g = make_grid(1, n, 8.0);
    const Field u = gaussian(g, 1.0, 0.5);
    const auto v = velocity_1d(u).components[0];
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double x = g.coordinate(i);
      const double exact = -2.0 * oracle::peak(1, 1.0, 0.5) * std::exp(-x * x / 0.5);
      err = std::max(err, std::abs((v[i + 1] - v[i - 1]) / (2.0 * g.spacing()) - exact));
    }
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.0);
    prev = err;
  }
}

TEST_CASE("2D spectral velocity matches direct quadrature") {
  std::mt19937_64 rng(3);
  for (std::size_t n : {8u, 16u, 32u}) {
    const Grid g = make_grid(2, n, 6.0);
    for (const Field& u : {gaussian(g, 1.0, 0.35), random_nonnegative(g, rng)}) {
      const auto ref = oracle::velocity_2d_direct(u);
      const VelocityField spec = velocity_2d_spectral(u);
      const VelocityField direct = velocity_direct_oracle(u);
      for (int c = 0; c < 2; ++c) {
        CHECK(rel_max(ref[c], spec.components[c]) <= 1e-10);
        CHECK(rel_max(ref[c], direct.components[c]) <= 1e-10);
      }
      CHECK(spec.max_magnitude() <= mass(u) * (1.0 + 1e-8));
    }
  }
}

TEST_CASE("2D velocity parity for radial data") {
  const Grid g = make_grid(2, 32, 6.0);
  const Field u = gaussian(g, 1.0, 0.35);
  const VelocityField v = velocity_2d_spectral(u);
  const std::size_t n = g.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t ri = n - 1 - i, rj = n - 1 - j;
      CHECK(std::abs(v.components[0][i * n + j] + v.components[0][ri * n + j]) <= 1e-10);
      CHECK(std::abs(v.components[0][i * n + j] - v.components[0][i * n + rj]) <= 1e-10);
      CHECK(std::abs(v.components[1][i * n + j] + v.components[1][i * n + rj]) <= 1e-10);
      CHECK(std::abs(v.components[1][i * n + j] - v.components[1][ri * n + j]) <= 1e-10);
    }
}

TEST_CASE("direct oracle is linear and translation equivariant") {
  std::mt19937_64 rng(5);
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, dim == 1 ? 64 : 16, 4.0);
    const Field f = random_nonnegative(g, rng), q = random_nonnegative(g, rng);
    const VelocityField vf = velocity_direct_oracle(f), vq = velocity_direct_oracle(q);
    const VelocityField vs = velocity_direct_oracle(combine(1.0, f, 1.0, q));
    for (int c = 0; c < dim; ++c)
      for (std::size_t k = 0; k < g.cells(); ++k)
        CHECK(std::abs(vs.components[c][k] - vf.components[c][k] - vq.components[c][k]) <= 1e-12);

    const VelocityField moved = velocity_direct_oracle(shifted(f, 1, dim == 2 ? 1 : 0));
    const std::size_t n = g.n();
    for (int c = 0; c < dim; ++c)
      for (std::size_t k = 0; k < g.cells(); ++k) {
        const std::size_t i = dim == 1 ? k : k / n, j = dim == 1 ? 0 : k % n;
        const std::size_t src = dim == 1 ? (i + n - 1) % n : ((i + n - 1) % n) * n + (j + n - 1) % n;
        CHECK(moved.components[c][k] == doctest::Approx(vf.components[c][src]).epsilon(1e-12));
      }
  }
  CHECK_THROWS_AS(velocity_direct_oracle(Field(make_grid(2, 128, 4.0))), std::invalid_argument);
}

TEST_CASE("direct oracle agrees with the prefix-sum velocity for concentrated data") {
  const Grid g = make_grid(1, 512, 16.0);
  const Field u = gaussian(g, 1.0, 0.5);
  const VelocityField a = velocity_direct_oracle(u);
  const VelocityField b = velocity_1d(u);
  // The periodized sign kernel flips for separations beyond L/2, so compare
  // where all the mass lies within half a period.
  for (std::size_t i = g.n() / 4; i < 3 * g.n() / 4; ++i)
    CHECK(std::abs(a.components[0][i] - b.components[0][i]) <= 1e-12);
}

TEST_CASE("riesz convolution matches direct quadrature") {
  std::mt19937_64 rng(9);
  for (double lambda : {0.25, 0.5, 0.75}) {
    const Grid g = make_grid(1, 128, 8.0);
    for (const Field& u : {gaussian(g, 1.0, 0.4), random_nonnegative(g, rng)}) {
      const auto ref = oracle::riesz_direct(u, lambda);
      const Field got = riesz_convolve(u, lambda);
      CHECK(rel_max(ref, got.values()) <= 1e-10);
      for (double v : got.values()) CHECK(v >= -1e-12);
    }
  }
  for (double lambda : {0.5, 1.0, 1.5}) {
    const Grid g = make_grid(2, 32, 6.0);
    for (const Field& u : {gaussian(g, 1.0, 0.35), random_nonnegative(g, rng)}) {
      const auto ref = oracle::riesz_direct(u, lambda);
      const Field got = riesz_convolve(u, lambda);
      CHECK(rel_max(ref, got.values()) <= 1e-10);
      for (double v : got.values()) CHECK(v >= -1e-12);
    }
  }
  CHECK_THROWS_AS(riesz_convolve(Field(make_grid(1, 16, 4.0)), 1.0), std::invalid_argument);
}

TEST_CASE("riesz origin average") {
  for (double lambda : {0.3, 1.0, 1.7})
    CHECK(riesz_origin_average(2, 0.1, lambda) ==
          doctest::Approx(oracle::riesz_origin_mean(2, 0.1, lambda)).epsilon(1e-12));
  CHECK(riesz_origin_average(1, 0.1, 0.5) == doctest::Approx(oracle::riesz_origin_mean(1, 0.1, 0.5)).epsilon(1e-14));
}
