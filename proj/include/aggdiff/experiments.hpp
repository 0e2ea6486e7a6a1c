#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aggdiff/solver.hpp"

namespace aggdiff {

/// Summary statistics of one run in a sweep.
struct SweepRow {
  double eps = 0.0;
  std::size_t n = 0;
  double extent = 0.0;
  double t_star = 0.0;
  std::vector<double> hm_integral;  // m = 0..m_max: int_0^T ||u||_{H^m} dt
  std::vector<double> hm_sup;       // sup_t ||u||_{H^m}
  std::vector<double> hm_initial;   // ||u0||_{H^m}
  std::vector<double> lp_integral;  // per p in p_list
  std::vector<double> length_scale; // m = 0..m_max-1: <H^m>/<H^(m+1)>
  double mass_drift = 0.0;          // max relative deviation of mass
  double runtime_seconds = 0.0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  int dim = 1;
  int m_max = 0;
  std::vector<double> p_list;
  std::vector<SweepRow> rows;  // sorted by eps descending

  bool complete() const;
  std::vector<std::pair<double, double>> pairs_hm_integral(int m) const;
  std::vector<std::pair<double, double>> pairs_hm_sup(int m) const;
  std::vector<std::pair<double, double>> pairs_lp_integral(double p) const;
  std::vector<std::pair<double, double>> pairs_length_scale(int m) const;
};

struct ResolutionRule {
  double cells_per_eps = 4.0;
  std::size_t n_max = 0;  // 0: dimension default
};

struct SweepOptions {
  double min_decades = 1.5;
  std::size_t min_points = 6;
  unsigned workers = 0;  // 0: AGGDIFF_WORKERS or hardware concurrency
};

/// Geometric list from eps_max down to eps_min.
std::vector<double> geometric_eps(double eps_min, double eps_max, std::size_t count);

/// Worker count from AGGDIFF_WORKERS, falling back to hardware concurrency.
unsigned default_workers();

/// Runs base_config at every eps with the grid chosen by the rule.  Rows
/// whose run aborts are kept and marked failed.
SweepResult sweep(const RunConfig& base_config, std::vector<double> eps_list,
                  const ResolutionRule& rule, const SweepOptions& options = {});

/// Least-squares line through (log eps, log value), checked against a
/// theoretical slope.
struct FitReport {
  std::string id;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double theory_slope = 0.0;
  double tolerance = 0.0;
  double min_r2 = 0.0;
  std::size_t points = 0;
  // Implied-constant stability (value * eps^-theory): max/min over the sweep.
  double constant_ratio = 0.0;
  double ratio_threshold = 0.0;  // 0: not checked
  bool pass = false;
  std::string note;
  std::vector<std::pair<double, double>> pairs;  // (eps, value) used in the fit
};

FitReport fit_exponent(const std::vector<std::pair<double, double>>& pairs, std::string id = "fit",
                       double theory_slope = 0.0, double tolerance = 0.0, double min_r2 = 0.0);

/// Slope tolerance for the Sobolev time integral of order m (0.10, 0.15, 0.25, ...).
double sobolev_slope_tolerance(int m);

/// Time-integrated H^m seminorm against -(2m+N)/2.
FitReport sobolev_scaling_check(const SweepResult& sweep, int m, double tolerance,
                                double min_r2);

/// sup_t ||u||_{H^m} eps^((N+2m)/2) stable within the ratio threshold, and the
/// smallest eps exceeding ||u0||_{H^m}.
FitReport envelope_check(const SweepResult& sweep, int m, double ratio_threshold = 3.0);

/// int ||u||_{H^m} eps^((2m+N)/2) positive and stable within the threshold.
FitReport lower_check(const SweepResult& sweep, int m, double ratio_threshold = 3.0);

/// Time-integrated L^p norm against -N(1 - 1/p).
FitReport lp_scaling_check(const SweepResult& sweep, double p, double tolerance);

/// <H^m>/<H^(m+1)> against slope +1.
FitReport length_scale_check(const SweepResult& sweep, int m, double tolerance);

/// Scaling checks for a completed sweep.  1D: Sobolev slopes m = 0..2,
/// L^p slopes p = 2, 3, 4, the length scale, upper envelopes and lower
/// bounds.  2D: the m = 0 Sobolev slope.
std::vector<FitReport> scaling_report(const SweepResult& sweep);

/// Number of adjacent pairs (in eps-descending order) where the H^m time
/// integral decreases as eps decreases.
std::size_t monotonicity_inversions(const SweepResult& sweep, int m);

}  // namespace aggdiff
