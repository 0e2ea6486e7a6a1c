#include "aggdiff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace aggdiff {

bool SweepResult::complete() const {
  return !rows.empty() && std::none_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed; });
}

namespace {

template <typename Get>
std::vector<std::pair<double, double>> collect(const SweepResult& sweep, Get&& get) {
  std::vector<std::pair<double, double>> out;
  for (const auto& row : sweep.rows)
    if (!row.failed) out.emplace_back(row.eps, get(row));
  return out;
}

std::size_t index_of_p(const SweepResult& sweep, double p) {
  for (std::size_t k = 0; k < sweep.p_list.size(); ++k)
    if (sweep.p_list[k] == p) return k;
  throw std::invalid_argument("sweep: p not in p_list");
}

void require_m(int m, int limit) {
  if (m < 0 || m > limit) throw std::invalid_argument("sweep: order m out of range");
}

}  // namespace

std::vector<std::pair<double, double>> SweepResult::pairs_hm_integral(int m) const {
  require_m(m, m_max);
  return collect(*this, [m](const SweepRow& r) { return r.hm_integral[static_cast<std::size_t>(m)]; });
}

std::vector<std::pair<double, double>> SweepResult::pairs_hm_sup(int m) const {
  require_m(m, m_max);
  return collect(*this, [m](const SweepRow& r) { return r.hm_sup[static_cast<std::size_t>(m)]; });
}

std::vector<std::pair<double, double>> SweepResult::pairs_lp_integral(double p) const {
  const std::size_t k = index_of_p(*this, p);
  return collect(*this, [k](const SweepRow& r) { return r.lp_integral[k]; });
}

std::vector<std::pair<double, double>> SweepResult::pairs_length_scale(int m) const {
  require_m(m, m_max - 1);
  return collect(*this, [m](const SweepRow& r) { return r.length_scale[static_cast<std::size_t>(m)]; });
}

std::vector<double> geometric_eps(double eps_min, double eps_max, std::size_t count) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min) || count < 1)
    throw std::invalid_argument("geometric_eps: need 0 < eps_min <= eps_max and count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = eps_max;
    return out;
  }
  const double ratio = std::log(eps_min / eps_max) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = eps_max * std::exp(ratio * static_cast<double>(k));
  out.back() = eps_min;
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("AGGDIFF_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SweepRow summarize(double eps, std::size_t n, const RunResult& result, int m_max,
                   const std::vector<double>& p_list) {
  SweepRow row;
  row.eps = eps;
  row.n = n;
  row.t_star = result.t_star;
  const auto& series = result.series;
  for (int m = 0; m <= m_max; ++m) {
    const auto column = series.column(hm_key(m));
    row.hm_integral.push_back(time_integral(series, hm_key(m)));
    row.hm_sup.push_back(*std::max_element(column.begin(), column.end()));
    row.hm_initial.push_back(column.front());
  }
  for (double p : p_list) row.lp_integral.push_back(time_integral(series, lp_key(p)));
  for (int m = 0; m < m_max; ++m) {
    row.length_scale.push_back(series.size() >= 16 ? length_scale(series, m)
                                                   : time_average(series, hm_key(m)) /
                                                         time_average(series, hm_key(m + 1)));
  }
  const auto masses = series.column("mass");
  for (double mval : masses) row.mass_drift = std::max(row.mass_drift, std::abs(mval / masses.front() - 1.0));
  return row;
}

}  // namespace

SweepResult sweep(const RunConfig& base_config, std::vector<double> eps_list, const ResolutionRule& rule,
                  const SweepOptions& options) {
  base_config.validate();
  if (eps_list.size() < options.min_points)
    throw std::invalid_argument("sweep: eps_list needs at least " + std::to_string(options.min_points) + " points");
  for (double e : eps_list)
    if (!(e > 0.0) || !std::isfinite(e)) throw std::invalid_argument("sweep: eps values must be positive");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  const double decades = std::log10(eps_list.front() / eps_list.back());
  if (decades < options.min_decades - 1e-9)
    throw std::invalid_argument("sweep: eps_list spans fewer than the required decades");

  const std::size_t n_max = rule.n_max ? rule.n_max : default_n_max(base_config.dim);
  std::vector<RunConfig> configs;
  for (double e : eps_list) {
    RunConfig cfg = base_config;
    cfg.eps = e;
    cfg.cells_per_eps = rule.cells_per_eps;
    cfg.n_max = n_max;
    cfg.extent = effective_extent(cfg);
    cfg.extent_per_eps = 0.0;
    cfg.n = resolution_n(e, cfg.extent, rule.cells_per_eps, n_max);
    configs.push_back(cfg);
  }
  // One window for every row, fixed by u0 on the finest grid.
  if (!base_config.t_star) {
    const Grid finest = config_grid(configs.back());
    const double t_star = default_t_star(initial_field(configs.back(), finest));
    for (auto& cfg : configs) cfg.t_star = t_star;
  }

  SweepResult result;
  result.dim = base_config.dim;
  result.m_max = base_config.m_max;
  result.p_list = base_config.p_list;
  result.rows.resize(configs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < configs.size(); k = next++) {
      const auto start = std::chrono::steady_clock::now();
      const RunConfig& cfg = configs[k];
      SweepRow row;
      try {
        const RunResult run_result = run(cfg);
        row = summarize(cfg.eps, cfg.n, run_result, cfg.m_max, cfg.p_list);
        row.extent = cfg.extent;
      } catch (const std::exception& e) {
        row.eps = cfg.eps;
        row.n = cfg.n;
        row.extent = cfg.extent;
        row.failed = true;
        row.error = e.what();
      }
      row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      result.rows[k] = std::move(row);
    }
  };
  const unsigned workers = std::min<std::size_t>(options.workers ? options.workers : default_workers(),
                                                 configs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return result;
}

FitReport fit_exponent(const std::vector<std::pair<double, double>>& pairs, std::string id, double theory_slope,
                       double tolerance, double min_r2) {
  if (pairs.size() < 4) throw std::invalid_argument("fit_exponent: needs at least 4 points");
  for (const auto& [e, v] : pairs)
    if (!(e > 0.0) || !(v > 0.0)) throw std::invalid_argument("fit_exponent: values must be positive");

  const auto count = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [e, v] : pairs) {
    mx += std::log(e);
    my += std::log(v);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [e, v] : pairs) {
    const double dx = std::log(e) - mx, dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_exponent: eps values must not all coincide");

  FitReport report;
  report.id = std::move(id);
  report.pairs = pairs;
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double ss_res = 0.0;
  for (const auto& [e, v] : pairs) {
    const double resid = std::log(v) - (report.intercept + report.slope * std::log(e));
    ss_res += resid * resid;
  }
  report.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  report.theory_slope = theory_slope;
  report.tolerance = tolerance;
  report.min_r2 = min_r2;
  report.points = pairs.size();

  double lo = kInfinity, hi = 0.0;
  for (const auto& [e, v] : pairs) {
    const double c = v * std::pow(e, -theory_slope);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  report.constant_ratio = hi / lo;
  report.pass = std::abs(report.slope - theory_slope) <= tolerance && report.r2 >= min_r2;
  return report;
}

double sobolev_slope_tolerance(int m) {
  if (m <= 0) return 0.10;
  if (m == 1) return 0.15;
  return 0.25;
}

namespace {

void require_complete(const SweepResult& sweep, const char* who) {
  if (!sweep.complete()) throw std::invalid_argument(std::string(who) + ": incomplete sweep");
}

std::string with_index(const char* stem, int m) { return std::string(stem) + "_" + std::to_string(m); }

}  // namespace

FitReport sobolev_scaling_check(const SweepResult& sweep, int m, double tolerance, double min_r2) {
  require_complete(sweep, "sobolev_scaling_check");
  const double theory = -(2.0 * m + sweep.dim) / 2.0;
  return fit_exponent(sweep.pairs_hm_integral(m), with_index("int_Hm", m), theory, tolerance, min_r2);
}

FitReport envelope_check(const SweepResult& sweep, int m, double ratio_threshold) {
  require_complete(sweep, "envelope_check");
  const double theory = -(sweep.dim + 2.0 * m) / 2.0;
  FitReport report = fit_exponent(sweep.pairs_hm_sup(m), with_index("sup_Hm", m), theory);
  report.ratio_threshold = ratio_threshold;
  const SweepRow& smallest = sweep.rows.back();
  const auto mi = static_cast<std::size_t>(m);
  const bool eps_term = smallest.hm_sup[mi] > smallest.hm_initial[mi];
  report.pass = report.constant_ratio <= ratio_threshold && eps_term;
  report.note = eps_term ? "sup exceeds ||u0|| at smallest eps" : "sup not above ||u0|| at smallest eps";
  return report;
}

FitReport lower_check(const SweepResult& sweep, int m, double ratio_threshold) {
  require_complete(sweep, "lower_check");
  const double theory = -(2.0 * m + sweep.dim) / 2.0;
  const auto pairs = sweep.pairs_hm_integral(m);
  FitReport report = fit_exponent(pairs, with_index("lower_Hm", m), theory);
  report.ratio_threshold = ratio_threshold;
  double smallest = kInfinity;
  for (const auto& [e, v] : pairs) smallest = std::min(smallest, v * std::pow(e, -theory));
  report.pass = smallest > 0.0 && report.constant_ratio <= ratio_threshold;
  return report;
}

FitReport lp_scaling_check(const SweepResult& sweep, double p, double tolerance) {
  require_complete(sweep, "lp_scaling_check");
  const double theory = std::isinf(p) ? -static_cast<double>(sweep.dim) : -sweep.dim * (1.0 - 1.0 / p);
  return fit_exponent(sweep.pairs_lp_integral(p), "int_" + lp_key(p), theory, tolerance);
}

FitReport length_scale_check(const SweepResult& sweep, int m, double tolerance) {
  require_complete(sweep, "length_scale_check");
  return fit_exponent(sweep.pairs_length_scale(m), with_index("length_scale", m), 1.0, tolerance);
}

std::vector<FitReport> scaling_report(const SweepResult& sweep) {
  std::vector<FitReport> out;
  if (sweep.dim == 2) {
    out.push_back(sobolev_scaling_check(sweep, 0, 0.15, 0.95));
    return out;
  }
  const int top = std::min(sweep.m_max, 2);
  for (int m = 0; m <= top; ++m) out.push_back(sobolev_scaling_check(sweep, m, sobolev_slope_tolerance(m), 0.98));
  for (double p : {2.0, 3.0, 4.0})
    if (std::find(sweep.p_list.begin(), sweep.p_list.end(), p) != sweep.p_list.end())
      out.push_back(lp_scaling_check(sweep, p, 0.12));
  if (sweep.m_max >= 1) out.push_back(length_scale_check(sweep, 0, 0.15));
  for (int m = 0; m <= top; ++m) out.push_back(envelope_check(sweep, m));
  for (int m = 0; m <= top; ++m) out.push_back(lower_check(sweep, m));
  return out;
}

std::size_t monotonicity_inversions(const SweepResult& sweep, int m) {
  const auto pairs = sweep.pairs_hm_integral(m);
  std::size_t out = 0;
  for (std::size_t k = 1; k < pairs.size(); ++k)
    if (pairs[k].second < pairs[k - 1].second) ++out;
  return out;
}

}  // namespace aggdiff
