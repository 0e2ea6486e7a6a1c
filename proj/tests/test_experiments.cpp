#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aggdiff/experiments.hpp"
#include "aggdiff/io.hpp"

using namespace aggdiff;

namespace {

// Synthetic sweep whose observables follow exact power laws in eps.
SweepResult synthetic(int dim, double extra_exponent) {
  SweepResult s;
  s.dim = dim;
  s.m_max = 2;
  s.p_list = {1.0, 2.0, 3.0, 4.0};
  for (double eps : geometric_eps(1e-3, 0.1, 8)) {
    SweepRow r;
    r.eps = eps;
    r.n = 1024;
    for (int m = 0; m <= 2; ++m) {
      const double e = -(2.0 * m + dim) / 2.0 + extra_exponent;
      r.hm_integral.push_back(2.0 * std::pow(eps, e));
      r.hm_sup.push_back(3.0 * std::pow(eps, e));
      r.hm_initial.push_back(1.0);
    }
    for (double p : s.p_list) r.lp_integral.push_back(std::pow(eps, -dim * (1.0 - 1.0 / p)));
    r.length_scale = {0.5 * eps, 0.7 * eps};
    s.rows.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("fit_exponent on exact power laws") {
  std::vector<std::pair<double, double>> inv, root;
  for (double eps : geometric_eps(1e-3, 0.1, 10)) {
    inv.emplace_back(eps, 1.0 / eps);
    root.emplace_back(eps, 7.0 / std::sqrt(eps));
  }
  const FitReport a = fit_exponent(inv, "inv", -1.0, 0.1, 0.98);
  CHECK(std::abs(a.slope + 1.0) <= 1e-12);
  CHECK(std::abs(a.r2 - 1.0) <= 1e-12);
  CHECK(a.pass);
  const FitReport b = fit_exponent(root, "root", -0.5, 0.1);
  CHECK(std::abs(b.slope + 0.5) <= 1e-12);
  CHECK(std::abs(b.intercept - std::log(7.0)) <= 1e-12);
  CHECK(b.constant_ratio == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_exponent({{0.1, 1.0}, {0.2, 2.0}, {0.3, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(fit_exponent({{0.1, 1.0}, {0.2, -2.0}, {0.3, 3.0}, {0.4, 1.0}}), std::invalid_argument);
}

TEST_CASE("fit_exponent records its thresholds") {
  std::vector<std::pair<double, double>> pairs;
  for (double eps : geometric_eps(1e-2, 0.1, 6)) pairs.emplace_back(eps, std::pow(eps, -0.8));
  const FitReport r = fit_exponent(pairs, "steep", -0.5, 0.1, 0.9);
  CHECK(r.tolerance == 0.1);
  CHECK(r.min_r2 == 0.9);
  CHECK(r.theory_slope == -0.5);
  CHECK_FALSE(r.pass);
}

TEST_CASE("envelope and lower checks on synthetic sweeps") {
  const SweepResult exact = synthetic(1, 0.0);
  for (int m = 0; m <= 2; ++m) {
    const FitReport env = envelope_check(exact, m);
    CHECK(env.constant_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.pass);
    const FitReport low = lower_check(exact, m);
    CHECK(low.constant_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(low.pass);
  }
  // Half a power too steep: the compensated value drifts by sqrt(10) per decade.
  const SweepResult steep = synthetic(1, -0.5);
  const FitReport env = envelope_check(steep, 1);
  CHECK(env.constant_ratio == doctest::Approx(std::pow(10.0, 0.5 * 2.0)).epsilon(1e-10));
  CHECK_FALSE(env.pass);
}

TEST_CASE("lp and length scale checks on synthetic sweeps") {
  const SweepResult s = synthetic(1, 0.0);
  for (double p : {1.0, 2.0, 3.0, 4.0}) CHECK(lp_scaling_check(s, p, 0.12).pass);
  CHECK(lp_scaling_check(s, 1.0, 0.12).theory_slope == 0.0);
  CHECK(length_scale_check(s, 0, 0.15).pass);
  CHECK(monotonicity_inversions(s, 0) == 0);
  CHECK_THROWS_AS(lp_scaling_check(s, 5.0, 0.1), std::invalid_argument);
}

TEST_CASE("scaling report contents") {
  const auto one = scaling_report(synthetic(1, 0.0));
  CHECK(one.size() == 13);
  for (const auto& r : one) CHECK(r.pass);
  const auto two = scaling_report(synthetic(2, 0.0));
  REQUIRE(two.size() == 1);
  CHECK(two[0].theory_slope == -1.0);
}

TEST_CASE("incomplete sweeps are rejected") {
  SweepResult s = synthetic(1, 0.0);
  s.rows[3].failed = true;
  CHECK_FALSE(s.complete());
  CHECK_THROWS_AS(sobolev_scaling_check(s, 0, 0.1, 0.98), std::invalid_argument);
}

TEST_CASE("geometric eps list") {
  const auto e = geometric_eps(0.0125, 0.1, 10);
  REQUIRE(e.size() == 10);
  CHECK(e.front() == doctest::Approx(0.1));
  CHECK(e.back() == doctest::Approx(0.0125));
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] / e[k - 1] == doctest::Approx(e[1] / e[0]));
}

TEST_CASE("sweep rows follow the resolution rule and are deterministic") {
  RunConfig base;
  base.extent = 8.0;
  base.initial.sigma = 0.25;
  base.sample_count = 32;
  const auto eps = geometric_eps(0.003, 0.1, 6);
  const ResolutionRule rule{1.0, 0};
  SweepOptions opts;
  opts.workers = 2;
  const SweepResult a = sweep(base, eps, rule, opts);
  REQUIRE(a.rows.size() == 6);
  REQUIRE(a.complete());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(base.extent / a.rows[k].n <= a.rows[k].eps);
    if (k) CHECK(a.rows[k].n >= a.rows[k - 1].n);
    CHECK(a.rows[k].mass_drift <= 1e-10);
    CHECK(a.rows[k].lp_integral[0] == doctest::Approx(a.rows[k].t_star).epsilon(1e-10));
  }
  CHECK(lp_scaling_check(a, 1.0, 0.12).pass);

  const SweepResult b = sweep(base, {eps[2], eps[2], eps[0], eps[1], eps[3], eps[4]}, rule, SweepOptions{1.0, 6, 1});
  REQUIRE(b.complete());
  CHECK(b.rows[2].hm_integral == b.rows[3].hm_integral);

  // Same sweep on one worker: byte-identical CSV.
  const SweepResult c = sweep(base, eps, rule, SweepOptions{1.5, 6, 1});
  const auto dir = std::filesystem::temp_directory_path();
  write_sweep_csv(a, dir / "aggdiff_sweep_a.csv");
  write_sweep_csv(c, dir / "aggdiff_sweep_c.csv");
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(dir / "aggdiff_sweep_a.csv") == slurp(dir / "aggdiff_sweep_c.csv"));

  CHECK_THROWS_AS(sweep(base, geometric_eps(0.05, 0.1, 6), ResolutionRule{}), std::invalid_argument);
  CHECK_THROWS_AS(sweep(base, geometric_eps(0.001, 0.1, 4), ResolutionRule{}), std::invalid_argument);
}
