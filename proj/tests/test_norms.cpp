#include <doctest.h>

#include <cmath>
#include <random>

#include "aggdiff/norms.hpp"
#include "aggdiff/profiles.hpp"
#include "oracles.hpp"

using namespace aggdiff;

namespace {

Field smooth_random(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> amp;
  std::uniform_real_distribution<double> pos(-1.0, 1.0), width(0.35, 0.6);
  std::vector<double> v(grid.cells(), 0.0);
  for (int b = 0; b < 3; ++b) {
    const Field bump = sample(grid, [&, a = amp(rng), c1 = pos(rng), c2 = pos(rng), s = width(rng)](double x, double y) {
      const double r2 = (x - c1) * (x - c1) + (grid.dim() == 2 ? (y - c2) * (y - c2) : 0.0);
      return a * std::exp(-r2 / (2.0 * s * s));
    });
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += bump[k];
  }
  return Field(grid, std::move(v));
}

ObservableSeries frozen_series(const Field& u, std::size_t samples, int m_max) {
  ObservableSeries s({2.0}, m_max);
  for (std::size_t k = 0; k < samples; ++k) s.append(observe(u, static_cast<double>(k) / (samples - 1), {2.0}, m_max));
  return s;
}

}  // namespace

TEST_CASE("mass") {
  const Grid g = make_grid(1, 2048, 16.0);
  CHECK(std::abs(mass(gaussian(g, 1.0, 0.5)) - 1.0) <= 1e-12);
  CHECK(std::abs(mass(gaussian(g, 3.7, 0.5)) - 3.7) <= 1e-11);
  CHECK(mass(Field(g)) == 0.0);
}

TEST_CASE("first moment") {
  // |x| has a kink at a cell face, so the midpoint rule is second order there.
  const Grid g = make_grid(1, 65536, 16.0);
  CHECK(std::abs(first_moment(gaussian(g, 1.0, 0.5)) - oracle::first_moment_1d(1.0, 0.5)) <= 1e-8);
  CHECK(first_moment(Field(g)) == 0.0);

  // Direct sum oracle on a symmetric pair.
  const Field pair = gaussian_pair(g, 2.0, 0.2, 3.0);
  double direct = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) direct += std::abs(g.coordinate(i)) * pair.at(i) * g.spacing();
  CHECK(first_moment(pair) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(first_moment(pair) == doctest::Approx(2.0 * 3.0).epsilon(1e-6));

  const Grid g2 = make_grid(2, 512, 12.0);
  CHECK(first_moment(gaussian(g2, 1.0, 0.5)) == doctest::Approx(oracle::first_moment_2d(1.0, 0.5)).epsilon(1e-6));
}

TEST_CASE("lp norms of gaussians") {
  const Grid g = make_grid(1, 2048, 16.0);
  const Field u = gaussian(g, 1.0, 0.5);
  CHECK(lp_norm(u, 1.0) == doctest::Approx(mass(u)).epsilon(1e-14));
  CHECK(std::abs(lp_norm(u, 2.0) - oracle::l2_1d(1.0, 0.5)) <= 1e-8);
  for (double p : {3.0, 4.0, 1.5}) CHECK(std::abs(lp_norm(u, p) / oracle::lp_1d(p, 1.0, 0.5) - 1.0) <= 1e-8);

  // Cell centers straddle the origin; shift by half a cell to sample the peak.
  const Field on_peak = gaussian(g, 1.0, 0.5, 0.5 * g.spacing());
  CHECK(std::abs(lp_norm(on_peak, kInfinity) - oracle::peak(1, 1.0, 0.5)) <= 1e-8);
  CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);
}

TEST_CASE("sobolev seminorms of gaussians") {
  const Grid g = make_grid(1, 2048, 16.0);
  const Field u = gaussian(g, 1.0, 0.5);
  for (int m = 0; m <= 3; ++m) {
    const double got = sobolev_seminorm(u, m);
    CHECK(std::abs(got * got / oracle::hm_sq_1d(m, 1.0, 0.5) - 1.0) <= 1e-6);
  }
  const Grid g2 = make_grid(2, 256, 8.0);
  const Field v = gaussian(g2, 1.0, 0.5);
  for (int m = 0; m <= 3; ++m) {
    const double got = sobolev_seminorm(v, m);
    CHECK(std::abs(got * got / oracle::hm_sq_2d(m, 1.0, 0.5) - 1.0) <= 1e-6);
  }
  CHECK_THROWS_AS(sobolev_seminorm(u, -1), std::invalid_argument);
}

TEST_CASE("sobolev of a single mode") {
  const Grid g = make_grid(1, 64, 5.0);
  const double k = 2.0 * oracle::pi / 5.0;
  const Field u = sample(g, [k](double x, double) { return std::cos(k * x); });
  CHECK(sobolev_seminorm(u, 1) == doctest::Approx(k * sobolev_seminorm(u, 0)).epsilon(1e-13));
}

TEST_CASE("seminorm properties on random fields") {
  std::mt19937_64 rng(13);
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, dim == 1 ? 1024 : 128, 16.0);
    for (int trial = 0; trial < 100; ++trial) {
      const Field u = smooth_random(g, rng);
      const auto hs = sobolev_seminorms(u, 4);
      CHECK(std::abs(hs[0] - lp_norm(u, 2.0)) <= 1e-12 * hs[0]);
      for (int m = 1; m <= 3; ++m) CHECK(hs[m] <= std::sqrt(hs[m - 1] * hs[m + 1]) * (1.0 + 1e-10));

      const double c = -2.5;
      const Field cu = scaled(u, c);
      CHECK(lp_norm(cu, 3.0) == doctest::Approx(std::abs(c) * lp_norm(u, 3.0)).epsilon(1e-13));
      CHECK(sobolev_seminorm(cu, 2) == doctest::Approx(std::abs(c) * hs[2]).epsilon(1e-13));
      CHECK(mass(cu) == doctest::Approx(c * mass(u)).epsilon(1e-12));
      CHECK(first_moment(cu) == doctest::Approx(c * first_moment(u)).epsilon(1e-12));

      for (int m = 0; m <= 3; ++m) {
        const double w = wmp_seminorm(u, m, 2.0);
        if (dim == 1) {
          CHECK(std::abs(w - hs[m]) <= 1e-10 * hs[m]);
        } else {
          // Sum of m+1 partial norms against the spectral norm: between 1 and m+1.
          const double ratio = w / hs[m];
          CHECK(ratio >= 1.0 - 1e-10);
          CHECK(ratio <= (m + 1) * (1.0 + 1e-10));
        }
      }
      CHECK(wmp_seminorm(u, 0, 3.0) == lp_norm(u, 3.0));
    }
  }
}

TEST_CASE("2D first-order seminorm splits evenly for radial data") {
  const Grid g = make_grid(2, 128, 8.0);
  const Field u = gaussian(g, 1.0, 0.5);
  const double d1 = lp_norm(spectral_derivative(u, {1, 0}), 2.0);
  const double d2 = lp_norm(spectral_derivative(u, {0, 1}), 2.0);
  CHECK(std::abs(d1 - d2) <= 1e-10 * d1);
  CHECK(wmp_seminorm(u, 1, 2.0) == doctest::Approx(d1 + d2).epsilon(1e-12));
}

TEST_CASE("time integral and average") {
  ObservableSeries s({2.0}, 1);
  for (int k = 0; k <= 10; ++k) {
    ObservableRecord r;
    r.t = 0.1 * k;
    r.mass = 2.0;
    r.lp[2.0] = r.t;
    r.hm[0] = r.t;
    r.hm[1] = 1.0;
    s.append(r);
  }
  CHECK(time_integral(s, "mass") == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(time_integral(s, "Lp_2") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(time_average(s, "Hm_1") == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(time_integral(ObservableSeries({2.0}, 1), "mass"), std::invalid_argument);
  CHECK_THROWS_AS(time_integral(s, "Hm_7"), std::invalid_argument);

  ObservableRecord late;
  late.t = 0.5;
  CHECK_THROWS_AS(s.append(late), std::invalid_argument);
}

TEST_CASE("series columns") {
  ObservableSeries s({1.0, 2.0, kInfinity}, 2);
  const std::vector<std::string> want{"t", "mass", "moment1", "Lp_1", "Lp_2", "Lp_inf", "Hm_0", "Hm_1", "Hm_2"};
  CHECK(s.columns() == want);
}

TEST_CASE("length scale") {
  const Grid g = make_grid(1, 2048, 16.0);
  const double sigma = 0.5;
  const Field u = gaussian(g, 1.0, sigma);
  const auto series = frozen_series(u, 17, 3);
  for (int m = 0; m <= 2; ++m) {
    const double expected = sigma * std::sqrt(std::tgamma(m + 0.5) / std::tgamma(m + 1.5));
    CHECK(std::abs(length_scale(series, m) / expected - 1.0) <= 1e-6);
    CHECK(length_scale(series, m) ==
          doctest::Approx(sobolev_seminorm(u, m) / sobolev_seminorm(u, m + 1)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(length_scale(frozen_series(u, 8, 3), 0), std::invalid_argument);
  CHECK_THROWS_AS(length_scale(series, 3), std::invalid_argument);
}
