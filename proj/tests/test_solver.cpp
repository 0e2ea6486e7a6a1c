#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aggdiff/kernel.hpp"
#include "aggdiff/norms.hpp"
#include "aggdiff/profiles.hpp"
#include "aggdiff/solver.hpp"
#include "oracles.hpp"

using namespace aggdiff;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

// Cell averages of a fine 1D field onto a grid coarser by an integer factor.
std::vector<double> restrict_to(const Field& fine, std::size_t n) {
  const std::size_t factor = fine.grid().n() / n;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < fine.grid().n(); ++i) out[i / factor] += fine.at(i) / factor;
  return out;
}

// Linear interpolation of a 1D field at x.
double interpolate(const Field& f, double x) {
  const Grid& g = f.grid();
  const double s = (x + 0.5 * g.extent()) / g.spacing() - 0.5;
  const auto i = static_cast<std::size_t>(std::floor(s));
  const double w = s - std::floor(s);
  return (1.0 - w) * f.at(i) + w * f.at(i + 1);
}

Field advance_1d(Field u, double eps, double t_end, double cfl) {
  SolverState s = make_state(std::move(u), eps);
  while (s.t < t_end - 1e-14) {
    const double dt = std::min(stable_dt(s, cfl, t_end), t_end - s.t);
    s = step_1d(s, dt);
  }
  return s.field;
}

}  // namespace

TEST_CASE("stable_dt") {
  const Grid g = make_grid(1, 256, 16.0);
  const SolverState zero = make_state(Field(g), 0.1);
  CHECK(stable_dt(zero, 0.5, 1.0 / 256.0) == 1.0 / 256.0);

  const SolverState s = make_state(gaussian(g, 1.0, 0.5), 0.1);
  const double dt = stable_dt(s, 0.5, 1.0);
  CHECK(dt == doctest::Approx(0.5 * g.spacing() / 1.0).epsilon(1e-10));

  const SolverState fine = make_state(gaussian(make_grid(1, 512, 16.0), 1.0, 0.5), 0.1);
  CHECK(stable_dt(fine, 0.5, 1.0) == doctest::Approx(0.5 * dt).epsilon(1e-10));
}

TEST_CASE("1D step conserves mass for constant data") {
  const Grid g = make_grid(1, 128, 4.0);
  SolverState s = make_state(Field(g, std::vector<double>(128, 0.25)), 0.05);
  const double m0 = mass(s.field);
  s = step_1d(s, stable_dt(s, 0.5, 1.0));
  CHECK(std::abs(mass(s.field) - m0) <= 1e-13 * m0);
}

TEST_CASE("1D heat limit") {
  const double M = 1e-6, eps = 1.0, sigma = 0.5, L = 16.0, t = 0.01;
  const Grid g = make_grid(1, 1024, L);
  SolverState s = make_state(gaussian(g, M, sigma), eps);
  for (int k = 0; k < 100; ++k) s = step_1d(s, t / 100);
  const Field exact = sample(g, [&](double x, double) { return oracle::heat_gaussian_1d(x, t, eps, M, sigma, L); });
  CHECK(oracle::rel_l2(s.field.values(), exact.values()) <= 1e-3);
}

TEST_CASE("1D symmetry, positivity and conservation over 1000 steps") {
  const Grid g = make_grid(1, 1024, 16.0);
  SolverState s = make_state(gaussian(g, 1.0, 0.5), 0.02);
  const double m0 = mass(s.field);
  for (int k = 0; k < 1000; ++k) {
    const double before = mass(s.field);
    s = step_1d(s, stable_dt(s, 0.5, 1.0));
    CHECK(std::abs(mass(s.field) - before) <= 1e-13 * m0);
    double lo = 0.0;
    for (double v : s.field.values()) lo = std::min(lo, v);
    CHECK(lo >= -1e-14 * lp_norm(s.field, kInfinity));
  }
  CHECK(reflection_asymmetry(s.field) <= 1e-11);
}

TEST_CASE("1D grid refinement is at least first order") {
  const double eps = 0.1, t = 0.5;
  auto solve = [&](std::size_t n) { return advance_1d(gaussian(make_grid(1, n, 16.0), 1.0, 0.5), eps, t, 0.5); };
  const Field reference = solve(2048);
  auto error = [&](std::size_t n) {
    const Field u = solve(n);
    return oracle::rel_l2(u.values(), restrict_to(reference, n));
  };
  const double order = std::log2(error(256) / error(512));
  INFO("observed order " << order);
  CHECK(order >= 1.0);
}

TEST_CASE("2D heat limit") {
  const double M = 1e-6, eps = 1.0, sigma = 0.5, L = 8.0, t = 0.01;
  const Grid g = make_grid(2, 64, L);
  SolverState s = make_state(gaussian(g, M, sigma), eps);
  for (int k = 0; k < 10; ++k) s = step_2d(s, t / 10);
  const Field exact =
      sample(g, [&](double x, double y) { return oracle::heat_gaussian_2d(x, y, t, eps, M, sigma, L); });
  CHECK(oracle::rel_l2(s.field.values(), exact.values()) <= 1e-3);
}

TEST_CASE("2D zero mode is preserved over 1000 steps") {
  const Grid g = make_grid(2, 32, 6.0);
  SolverState s = make_state(gaussian(g, 1.0, 0.35), 0.1);
  const double m0 = mass(s.field);
  for (int k = 0; k < 1000; ++k) s = step_2d(s, 1e-3);
  CHECK(std::abs(mass(s.field) - m0) <= 1e-12 * m0);
  CHECK(reflection_asymmetry(s.field) <= 1e-10);
}

TEST_CASE("2D solver reproduces the 1D solver on extruded data") {
  const double eps = 0.1, sigma = 0.5, L = 8.0, t = 0.1;
  const Grid g2 = make_grid(2, 256, L);
  const Grid g1 = make_grid(1, 256, L);
  auto profile = [&](double x) { return std::exp(-0.5 * x * x / (sigma * sigma)) / (std::sqrt(2.0 * oracle::pi) * sigma); };

  // Line kernel: the velocity of the x1 profile, constant along x2.
  const VelocityOverride line_kernel = [&](const Field& u) {
    const std::size_t n = g2.n();
    std::vector<double> line(n);
    for (std::size_t i = 0; i < n; ++i) line[i] = u.at(i, 0);
    const VelocityField v1 = velocity_1d(Field(g1, std::move(line)));
    VelocityField out{g2, {std::vector<double>(n * n), std::vector<double>(n * n, 0.0)}};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.components[0][i * n + j] = v1.components[0][i];
    return out;
  };

  SolverState s2 = make_state(sample(g2, [&](double x, double) { return profile(x); }), eps);
  const int steps = 400;
  for (int k = 0; k < steps; ++k) s2 = step_2d(s2, t / steps, line_kernel);

  const Grid fine = make_grid(1, 65536, L);
  const Field u1 = advance_1d(sample(fine, [&](double x, double) { return profile(x); }), eps, t, 0.5);

  std::vector<double> reference(g2.n()), slice(g2.n());
  for (std::size_t i = 0; i < g2.n(); ++i) {
    reference[i] = interpolate(u1, g2.coordinate(i));
    slice[i] = s2.field.at(i, g2.n() / 3);
  }
  const double err = oracle::rel_l2(slice, reference);
  INFO("rel L2 " << err);
  CHECK(err <= 1e-4);
}

TEST_CASE("run with zero horizon returns the initial record") {
  RunConfig c;
  c.eps = 0.1;
  c.t_star = 0.0;
  const RunResult r = run(c);
  REQUIRE(r.series.size() == 1);
  CHECK(r.series.records()[0].t == 0.0);
  CHECK(r.series.records()[0].hm.at(0) == doctest::Approx(oracle::l2_1d(1.0, 0.5)).epsilon(1e-8));
}

TEST_CASE("1D run conserves mass and concentrates") {
  RunConfig c;
  c.eps = 0.05;
  const RunResult r = run(c);
  CHECK(r.series.size() == c.sample_count + 1);
  CHECK(r.t_star == doctest::Approx(4.0 * first_moment(initial_field(c, config_grid(c)))).epsilon(1e-15));
  CHECK(r.t_star == doctest::Approx(4.0 * oracle::first_moment_1d(1.0, 0.5)).epsilon(1e-4));
  const auto masses = r.series.column("mass");
  for (double m : masses) CHECK(std::abs(m - masses.front()) <= 1e-10 * masses.front());
  const auto l2 = r.series.column("Hm_0");
  CHECK(*std::max_element(l2.begin(), l2.end()) > l2.front());
  // Approaching the steady profile whose squared L2 norm is M^3 / (6 eps).
  CHECK(l2.back() == doctest::Approx(std::sqrt(1.0 / (6.0 * c.eps))).epsilon(0.1));
  CHECK(r.max_asymmetry <= 1e-10);
  CHECK(r.min_relative_value >= -1e-14);
}

TEST_CASE("time integral converges in the sampling interval") {
  RunConfig c;
  c.eps = 0.05;
  c.n = 2048;
  const double coarse = time_integral(run(c).series, "Hm_1");
  c.sample_count = 512;
  const double fine = time_integral(run(c).series, "Hm_1");
  CHECK(std::abs(coarse / fine - 1.0) < 1e-3);
}

TEST_CASE("boundary monitor aborts runs that reach the box edge") {
  RunConfig c;
  c.eps = 2.0;
  c.n = 256;
  c.t_star = 5.0;
  CHECK_THROWS_AS(run(c), RunAborted);
}

TEST_CASE("config validation names the key") {
  RunConfig c;
  c.eps = -1.0;
  try {
    c.validate();
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).rfind("eps", 0) == 0);
  }
  RunConfig d;
  d.cfl = 1.5;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  RunConfig e;
  e.t_star = -1.0;
  CHECK_THROWS_AS(e.validate(), std::invalid_argument);
}

TEST_CASE("resolution rule") {
  const std::size_t cap = default_n_max(1);
  CHECK(resolution_n(0.1, 16.0, 4.0, cap) == 1024);
  CHECK(resolution_n(1.25e-3, 16.0, 4.0, cap) == 65536);
  CHECK(resolution_n(1e-5, 16.0, 4.0, cap) == (1u << 18));
  CHECK(16.0 / resolution_n(0.0377, 16.0, 4.0, cap) <= 0.0377 / 4.0);
  CHECK(default_n_max(2) == 1024);
}
