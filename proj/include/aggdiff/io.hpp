#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aggdiff/experiments.hpp"
#include "aggdiff/solver.hpp"

namespace aggdiff {

/// Parses key=value lines ('#' starts a comment).  Unknown keys, malformed
/// values and invariant violations throw std::invalid_argument naming the key.
///
/// Keys: dim, n, L, L_per_eps, eps, T_star, cfl, sample_count, m_max, p_list, profile,
/// mass, sigma, center, boundary_tol, positivity_tol, cells_per_eps, n_max.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

/// Renders a config back into the key=value format.
std::string format_config(const RunConfig& config);

/// Shortest round-trip decimal is not required; 17 significant digits are.
std::string format_double(double value);

void write_series_csv(const ObservableSeries& series, const std::filesystem::path& path);
ObservableSeries read_series_csv(const std::filesystem::path& path);

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);
SweepResult read_sweep_csv(const std::filesystem::path& path);

void write_fit_reports_json(const std::vector<FitReport>& reports,
                            const std::filesystem::path& path);

/// Standalone SVG with log-log axes, markers, fitted line and slope annotation.
void emit_loglog_svg(const FitReport& report, const std::vector<std::pair<double, double>>& pairs,
                     const std::filesystem::path& path);
std::string loglog_svg(const FitReport& report, const std::vector<std::pair<double, double>>& pairs);

/// Binary snapshot: int64 dim, int64 n, float64 L, float64 t, float64 eps,
/// then n^dim float64 samples, all little-endian.
void write_snapshot(const SolverState& state, const std::filesystem::path& path);

struct Snapshot {
  Field field;
  double t = 0.0;
  double eps = 0.0;
};
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace aggdiff
