#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aggdiff/field.hpp"
#include "aggdiff/kernel.hpp"
#include "aggdiff/norms.hpp"

namespace aggdiff {

/// Raised when a run leaves the regime where its results are meaningful
/// (boundary mass reaching the box edge, loss of positivity in 2D).
class RunAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Profile { gaussian, gaussian_pair };

struct InitialCondition {
  Profile profile = Profile::gaussian;
  double mass = 1.0;
  double sigma = 0.5;
  double center = 0.0;  // gaussian: center on x1; gaussian_pair: offset
};

struct RunConfig {
  int dim = 1;
  std::size_t n = 0;          // 0: pick from the resolution rule
  double extent = 16.0;       // L
  double extent_per_eps = 0.0;  // box length max(L, extent_per_eps * eps)
  double eps = 0.05;
  std::optional<double> t_star;  // unset: 4 I0 / M^2
  double cfl = 0.5;
  std::size_t sample_count = 256;
  int m_max = 4;
  std::vector<double> p_list{1.0, 2.0, 3.0, 4.0, kInfinity};
  InitialCondition initial;
  double boundary_tol = 1e-12;  // boundary_ratio limit checked at every sample
  double positivity_tol = 1e-3; // 2D abort when min u < -tol * max u
  double cells_per_eps = 4.0;   // resolution rule h <= eps / cells_per_eps
  std::size_t n_max = 0;        // 0: 2^18 in 1D, 1024 in 2D

  /// Throws std::invalid_argument naming the offending key.
  void validate() const;
};

/// Smallest power of two n >= 8 with L/n <= eps/cells_per_eps, capped at n_max.
std::size_t resolution_n(double eps, double extent, double cells_per_eps, std::size_t n_max);

std::size_t default_n_max(int dim);

/// max(L, extent_per_eps * eps): room for the exp(-M|x|/eps) tail of the
/// concentrated state at large eps.
double effective_extent(const RunConfig& config);

/// Grid implied by the config (explicit n or the resolution rule).
Grid config_grid(const RunConfig& config);

Field initial_field(const RunConfig& config, const Grid& grid);

/// 4 I0 / M^2 with I0 the first moment of u0.
double default_t_star(const Field& u0);

/// Replaces the computed grad K * u in the 2D stepper; test fixtures use it
/// to swap in other kernels.
using VelocityOverride = std::function<VelocityField(const Field&)>;

struct SolverState {
  Field field;
  double t = 0.0;
  double eps = 0.0;
  VelocityField velocity;
  std::size_t steps = 0;
};

/// State at time t with the velocity cache filled for the field's dimension.
SolverState make_state(Field field, double eps, double t = 0.0);

/// cfl * h / max|v|, capped at dt_cap.
double stable_dt(const SolverState& state, double cfl, double dt_cap);

/// Explicit upwind transport with the cumulative-mass velocity, followed by
/// backward-Euler diffusion on the periodic lattice.
SolverState step_1d(const SolverState& state, double dt);

/// Integrating-factor Heun step: advection spectrally with 2/3-rule
/// dealiasing, diffusion exactly through exp(-eps |k|^2 dt).
SolverState step_2d(const SolverState& state, double dt,
                    const VelocityOverride& velocity_override = {});

struct RunResult {
  ObservableSeries series;
  SolverState final_state;
  double t_star = 0.0;
  double max_boundary_ratio = 0.0;
  double min_relative_value = 0.0;  // min u / max u over sampled states
  double max_asymmetry = 0.0;       // reflection asymmetry over sampled states
};

/// Observer invoked on every sampled state.
using SampleObserver = std::function<void(const SolverState&)>;

/// Integrates to t_star and samples observables at sample_count + 1 uniform
/// times (time steps are shortened to land on sample times).
RunResult run(const RunConfig& config, const SampleObserver& observer = {});

/// Same, from an explicit initial field.
RunResult run(const RunConfig& config, const Field& u0, const SampleObserver& observer = {});

}  // namespace aggdiff
