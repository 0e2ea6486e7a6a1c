#include "aggdiff/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include "aggdiff/kernel.hpp"
#include "aggdiff/norms.hpp"
#include "aggdiff/profiles.hpp"

namespace aggdiff {

namespace {

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Right-hand side of N/r = beta - theta (m - N/p) + (1 - theta) N/q.
double gn_rhs(int N, int m, int beta, double p, double q, double theta) {
  return beta - theta * (m - N * reciprocal(p)) + (1.0 - theta) * N * reciprocal(q);
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

}  // namespace

double GNParams::relation_residual() const {
  return N * reciprocal(r) - gn_rhs(N, m, beta, p, q, theta);
}

GNParams gn_solve(int N, int m, int beta, double p, double q, double theta) {
  if (N < 1) throw std::invalid_argument("gn_solve: N must be positive");
  if (!(m > beta) || beta < 0) throw std::invalid_argument("gn_solve: need m > beta >= 0");
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("gn_solve: p and q must lie in [1, inf]");
  const double lower = static_cast<double>(beta) / m;
  if (!(theta >= lower) || !(theta < 1.0))
    throw std::invalid_argument(fmt("gn_solve: theta=%g outside [beta/m, 1) = [%g, 1)", theta, lower));

  const double n_over_r = gn_rhs(N, m, beta, p, q, theta);
  constexpr double zero_tol = 1e-12;
  if (n_over_r < -zero_tol) throw std::invalid_argument(fmt("gn_solve: N/r = %g is negative", n_over_r));
  GNParams out{N, m, beta, p, q, theta, 0.0};
  if (std::abs(n_over_r) <= zero_tol) {
    out.r = kInfinity;
  } else {
    out.r = N / n_over_r;
    if (out.r < 1.0) throw std::invalid_argument(fmt("gn_solve: r = %g is below 1", out.r));
  }

  if (beta == 0 && std::isinf(out.r) && std::isinf(q)) {
    const double gap = m - N * reciprocal(p);
    if (gap >= -zero_tol && std::abs(gap - std::round(gap)) <= zero_tol)
      throw std::invalid_argument("gn_solve: excluded endpoint (beta = 0, r = q = inf, m - N/p integer)");
  }
  return out;
}

double gn_ratio(const Field& field, const GNParams& params) {
  if (field.grid().dim() != params.N) throw std::invalid_argument("gn_ratio: dimension mismatch");
  const int order = std::max(4, params.m);
  const double lhs = wmp_seminorm(field, params.beta, params.r, order);
  const double top = wmp_seminorm(field, params.m, params.p, order);
  const double low = lp_norm(field, params.q);
  if (!(top > 0.0) || !(low > 0.0)) throw std::invalid_argument("gn_ratio: degenerate field");
  const double ratio = lhs / (std::pow(top, params.theta) * std::pow(low, 1.0 - params.theta));
  if (!std::isfinite(ratio)) throw std::invalid_argument("gn_ratio: non-finite ratio");
  return ratio;
}

double HLSParams::relation_residual() const { return 1.0 / p + lambda / N - 1.0 / q - 1.0; }

HLSParams hls_solve(int N, double p, double lambda) {
  if (N < 1) throw std::invalid_argument("hls_solve: N must be positive");
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("hls_solve: p must lie in (1, inf)");
  if (!(lambda > 0.0) || !(lambda < N)) throw std::invalid_argument("hls_solve: lambda must lie in (0, N)");
  const double inv_q = 1.0 / p + lambda / N - 1.0;
  if (!(inv_q > 0.0) || !(inv_q < 1.0))
    throw std::invalid_argument(fmt("hls_solve: 1/q = %g gives q outside (1, inf)", inv_q));
  return HLSParams{N, p, 1.0 / inv_q, lambda};
}

double hls_ratio(const Field& field, const HLSParams& params) {
  if (field.grid().dim() != params.N) throw std::invalid_argument("hls_ratio: dimension mismatch");
  const double denom = lp_norm(field, params.p);
  if (!(denom > 0.0)) throw std::invalid_argument("hls_ratio: zero field");
  return lp_norm(riesz_convolve(field, params.lambda), params.q) / denom;
}

double hls_sharp_constant(int N, double lambda) {
  const double n = N;
  return std::pow(std::numbers::pi, 0.5 * lambda) * std::tgamma(0.5 * (n - lambda)) /
         std::tgamma(n - 0.5 * lambda) *
         std::pow(std::tgamma(0.5 * n) / std::tgamma(n), -1.0 + lambda / n);
}

namespace {

// Non-negative mixture of 1..4 Gaussians placed well inside the box.
Field random_mixture(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double L = grid.extent();
  const double s_min = 6.0 * grid.spacing();
  const double s_max = L / 24.0;
  Field out(grid);
  const int k = count(rng);
  for (int c = 0; c < k; ++c) {
    const double sigma = s_min + (s_max - s_min) * unit(rng);
    const double reach = 0.5 * L - 8.0 * sigma;
    const double center = (2.0 * unit(rng) - 1.0) * 0.5 * reach;
    const double weight = 0.1 + unit(rng);
    const double peak = weight * std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * grid.dim());
    const double c2 = grid.dim() == 2 ? (2.0 * unit(rng) - 1.0) * 0.5 * reach : 0.0;
    out = combine(1.0, out, 1.0, sample(grid, [&](double x1, double x2) {
                    const double d1 = x1 - center, d2 = grid.dim() == 2 ? x2 - c2 : 0.0;
                    return peak * std::exp(-(d1 * d1 + d2 * d2) / (2.0 * sigma * sigma));
                  }));
  }
  return out;
}

void add_spread(std::vector<InequalityCheck>& out, const std::string& name, const std::string& params,
                const std::vector<double>& values, double tol) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = *hi / *lo - 1.0;
  out.push_back({name, params, spread, tol, spread <= tol});
}

}  // namespace

std::vector<InequalityCheck> inequality_suite(unsigned seed) {
  std::vector<InequalityCheck> out;
  constexpr double relation_tol = 1e-12;

  // Exponent sets appearing in the energy estimates.
  struct GNCase {
    const char* label;
    int N, m, beta;
    double p, q, theta, expected_r;
  };
  std::vector<GNCase> gn_cases{{"L2 <= H1^(1/3) L1^(2/3)", 1, 1, 0, 2.0, 1.0, 1.0 / 3.0, 2.0}};
  for (int k = 0; k <= 3; ++k) {
    const double theta = (2.0 * k + 2.0) / (2.0 * k + 3.0);
    gn_cases.push_back({"W^{m,inf} <= L1 H^(m+1), N=1", 1, k + 1, k, 2.0, 1.0, theta, kInfinity});
  }
  for (int k = 1; k <= 3; ++k) {
    const double N = 2.0;
    const double theta = (4.0 * k + 2.0 * N + 1.0) / (2.0 * (2.0 * k + N + 2.0));
    gn_cases.push_back({"W^{m,4N/(2N-1)} <= L1 H^(m+1), N=2", 2, k + 1, k, 2.0, 1.0, theta,
                        4.0 * N / (2.0 * N - 1.0)});
  }
  for (int N = 1; N <= 2; ++N)
    for (int k = 1; k <= 3; ++k)
      gn_cases.push_back({"L2 <= H^m^(N/(N+2m)) L1", N, k, 0, 2.0, 1.0,
                          static_cast<double>(N) / (N + 2.0 * k), 2.0});

  for (const auto& c : gn_cases) {
    const auto params = gn_solve(c.N, c.m, c.beta, c.p, c.q, c.theta);
    const std::string desc = fmt("N=%d m=%d beta=%d p=%g q=%g theta=%.6g", c.N, c.m, c.beta, c.p, c.q, c.theta);
    const double residual = std::abs(params.relation_residual());
    out.push_back({std::string("gn_relation: ") + c.label, desc, residual, relation_tol, residual <= relation_tol});
    const double r_err = std::isinf(c.expected_r) ? (std::isinf(params.r) ? 0.0 : 1.0)
                                                  : std::abs(params.r - c.expected_r) / c.expected_r;
    out.push_back({std::string("gn_exponent_r: ") + c.label, desc + fmt(" r=%g", params.r), r_err,
                   relation_tol, r_err <= relation_tol});
  }

  struct HLSCase {
    int N;
    double p, lambda, expected_q;
  };
  for (const auto& c : {HLSCase{1, 4.0 / 3.0, 0.5, 4.0}, HLSCase{2, 4.0 / 3.0, 1.0, 4.0},
                        HLSCase{2, 1.5, 1.0, 6.0}}) {
    const auto params = hls_solve(c.N, c.p, c.lambda);
    const std::string desc = fmt("N=%d p=%g lambda=%g q=%g", c.N, c.p, c.lambda, params.q);
    const double residual = std::abs(params.relation_residual());
    out.push_back({"hls_relation", desc, residual, relation_tol, residual <= relation_tol});
    const double q_err = std::abs(params.q - c.expected_q) / c.expected_q;
    out.push_back({"hls_exponent_q", desc, q_err, relation_tol, q_err <= relation_tol});
  }

  // Homogeneity and dilation stability on Gaussian families.
  const Grid line = make_grid(1, 4096, 32.0);
  const auto gn1 = gn_solve(1, 1, 0, 2.0, 1.0, 1.0 / 3.0);
  const auto gn_inf = gn_solve(1, 2, 1, 2.0, 1.0, 4.0 / 5.0);
  const auto hls1 = hls_solve(1, 4.0 / 3.0, 0.5);
  const std::vector<double> sigmas{0.2, 0.3, 0.45, 0.7, 1.0};

  for (const auto* gp : {&gn1, &gn_inf}) {
    const std::string desc = fmt("N=1 m=%d beta=%d p=%g q=%g theta=%.6g", gp->m, gp->beta, gp->p, gp->q, gp->theta);
    const Field u = gaussian(line, 1.0, 0.5);
    const double base = gn_ratio(u, *gp);
    double worst = 0.0;
    for (double c : {0.1, 7.3, 1e3}) worst = std::max(worst, std::abs(gn_ratio(scaled(u, c), *gp) / base - 1.0));
    out.push_back({"gn_homogeneity", desc, worst, relation_tol, worst <= relation_tol});
    std::vector<double> ratios;
    for (double s : sigmas) ratios.push_back(gn_ratio(gaussian(line, 1.0, s), *gp));
    add_spread(out, "gn_dilation", desc + " sigma in [0.2,1]", ratios, 0.02);
  }

  const Grid wide = make_grid(1, 16384, 256.0);
  {
    const std::string desc = "N=1 p=4/3 lambda=1/2 q=4";
    const Field u = gaussian(wide, 1.0, 0.5);
    const double base = hls_ratio(u, hls1);
    double worst = 0.0;
    for (double c : {0.1, 7.3, 1e3}) worst = std::max(worst, std::abs(hls_ratio(scaled(u, c), hls1) / base - 1.0));
    out.push_back({"hls_homogeneity", desc, worst, relation_tol, worst <= relation_tol});
    std::vector<double> ratios;
    for (double s : sigmas) ratios.push_back(hls_ratio(gaussian(wide, 1.0, s), hls1));
    add_spread(out, "hls_dilation", desc + " sigma in [0.2,1]", ratios, 0.03);
  }
  {
    const Grid plane = make_grid(2, 512, 16.0);
    const auto hls2 = hls_solve(2, 4.0 / 3.0, 1.0);
    const std::string desc = "N=2 p=4/3 lambda=1 q=4";
    std::vector<double> ratios;
    for (double s : {0.25, 0.4, 0.6, 1.0}) ratios.push_back(hls_ratio(gaussian(plane, 1.0, s), hls2));
    add_spread(out, "hls_dilation", desc + " sigma in [0.25,1]", ratios, 0.03);
  }

  // Ensembles of random non-negative mixtures.
  std::mt19937_64 rng(seed);
  {
    const Grid grid = make_grid(1, 2048, 32.0);
    double worst = 0.0, smallest = kInfinity;
    for (int k = 0; k < 1000; ++k) {
      const double r = gn_ratio(random_mixture(grid, rng), gn1);
      worst = std::max(worst, r);
      smallest = std::min(smallest, r);
    }
    out.push_back({"gn_ensemble_max", "N=1 m=1 beta=0 p=2 q=1 theta=1/3, 1000 fields", worst, kInfinity,
                   std::isfinite(worst) && smallest > 0.0});
  }
  {
    const double sharp = hls_sharp_constant(1, 0.5);
    double worst = 0.0, smallest = kInfinity;
    for (int k = 0; k < 1000; ++k) {
      const double r = hls_ratio(random_mixture(wide, rng), hls1);
      worst = std::max(worst, r);
      smallest = std::min(smallest, r);
    }
    out.push_back({"hls_ensemble_max", fmt("N=1 p=4/3 lambda=1/2, 1000 fields, sharp C=%.6f", sharp), worst,
                   1.1 * sharp, worst <= 1.1 * sharp && smallest > 0.0});
  }
  return out;
}

}  // namespace aggdiff
