#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aggdiff/experiments.hpp"
#include "aggdiff/inequalities.hpp"
#include "aggdiff/io.hpp"
#include "aggdiff/solver.hpp"

namespace fs = std::filesystem;
using namespace aggdiff;

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kFail = 2;

void prepare_out(const fs::path& out) {
  fs::create_directories(out);
  if (!fs::is_directory(out)) throw std::runtime_error("--out is not a directory: " + out.string());
}

void require_file(const fs::path& path, const char* flag) {
  if (!fs::is_regular_file(path)) throw std::runtime_error(std::string(flag) + ": no such file " + path.string());
}

void print_report(const FitReport& r) {
  std::printf("%-4s %-16s slope=%+.4f theory=%+.4f tol=%.2f r2=%.4f ratio=%.3f\n", r.pass ? "PASS" : "FAIL",
              r.id.c_str(), r.slope, r.theory_slope, r.tolerance, r.r2, r.constant_ratio);
}

int emit_report(const SweepResult& result, const fs::path& out) {
  if (!result.complete()) {
    std::size_t failed = 0;
    for (const auto& row : result.rows) failed += row.failed;
    std::printf("FAIL sweep: %zu of %zu rows failed\n", failed, result.rows.size());
    for (const auto& row : result.rows)
      if (row.failed) std::printf("     eps=%.6g: %s\n", row.eps, row.error.c_str());
    return kFail;
  }
  const auto reports = scaling_report(result);
  write_fit_reports_json(reports, out / "fits.json");
  bool ok = true;
  for (const auto& r : reports) {
    print_report(r);
    emit_loglog_svg(r, r.pairs, out / (r.id + ".svg"));
    ok = ok && r.pass;
  }
  return ok ? kPass : kFail;
}

int cmd_run(const fs::path& config_path, const fs::path& out) {
  require_file(config_path, "--config");
  const RunConfig config = parse_config(config_path);
  prepare_out(out);
  std::ofstream(out / "config.txt") << format_config(config);
  try {
    const RunResult result = run(config);
    write_series_csv(result.series, out / "series.csv");
    write_snapshot(result.final_state, out / "final.bin");
    const auto& first = result.series.row(0);
    const auto& last = result.series.row(result.series.size() - 1);
    std::printf("t_star=%.6g n=%zu steps=%zu mass0=%.17g mass=%.17g\n", result.t_star,
                result.final_state.field.grid().n(), result.final_state.steps, first[1], last[1]);
    return kPass;
  } catch (const RunAborted& e) {
    std::printf("FAIL run aborted: %s\n", e.what());
    return kFail;
  }
}

int cmd_sweep(const fs::path& config_path, double eps_min, double eps_max, std::size_t count, double min_decades,
              const fs::path& out) {
  require_file(config_path, "--config");
  const RunConfig config = parse_config(config_path);
  prepare_out(out);
  SweepOptions options;
  options.min_decades = min_decades;
  const ResolutionRule rule{config.cells_per_eps, config.n_max};
  const SweepResult result = sweep(config, geometric_eps(eps_min, eps_max, count), rule, options);
  write_sweep_csv(result, out / "sweep.csv");
  for (const auto& row : result.rows)
    std::printf("eps=%-12.6g n=%-7zu L=%-8.4g runtime=%.1fs%s\n", row.eps, row.n, row.extent, row.runtime_seconds,
                row.failed ? " failed" : "");
  return emit_report(result, out);
}

int cmd_report(const fs::path& sweep_path, const fs::path& out) {
  require_file(sweep_path, "--sweep");
  const SweepResult result = read_sweep_csv(sweep_path);
  prepare_out(out);
  return emit_report(result, out);
}

int cmd_inequalities(const fs::path& out) {
  prepare_out(out);
  const auto checks = inequality_suite();
  nlohmann::json array = nlohmann::json::array();
  bool ok = true;
  for (const auto& c : checks) {
    std::printf("%-4s %-28s %s value=%.6g threshold=%.6g\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.params.c_str(), c.value, c.threshold);
    array.push_back({{"name", c.name}, {"params", c.params}, {"value", c.value}, {"threshold", c.threshold},
                     {"pass", c.pass}});
    ok = ok && c.pass;
  }
  std::ofstream(out / "inequalities.json") << array.dump(2) << '\n';
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aggregation-diffusion laboratory"};
  app.require_subcommand(1);

  fs::path config_path, out, sweep_path;
  double eps_min = 0.0, eps_max = 0.0, min_decades = 1.5;
  std::size_t eps_count = 0;

  auto* run_cmd = app.add_subcommand("run", "Integrate one configuration");
  run_cmd->add_option("--config", config_path)->required();
  run_cmd->add_option("--out", out)->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Run an eps sweep and fit scaling exponents");
  sweep_cmd->add_option("--config", config_path)->required();
  sweep_cmd->add_option("--eps-min", eps_min)->required();
  sweep_cmd->add_option("--eps-max", eps_max)->required();
  sweep_cmd->add_option("--eps-count", eps_count)->required();
  sweep_cmd->add_option("--min-decades", min_decades, "Minimum eps span in decades")->capture_default_str();
  sweep_cmd->add_option("--out", out)->required();

  auto* report_cmd = app.add_subcommand("report", "Fit scaling exponents from a sweep CSV");
  report_cmd->add_option("--sweep", sweep_path)->required();
  report_cmd->add_option("--out", out)->required();

  auto* ineq_cmd = app.add_subcommand("check-inequalities", "Run the inequality suites");
  ineq_cmd->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kError;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, out);
    if (*sweep_cmd) return cmd_sweep(config_path, eps_min, eps_max, eps_count, min_decades, out);
    if (*report_cmd) return cmd_report(sweep_path, out);
    return cmd_inequalities(out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
}
