#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aggdiff/experiments.hpp"
#include "aggdiff/inequalities.hpp"
#include "aggdiff/io.hpp"
#include "aggdiff/norms.hpp"
#include "aggdiff/profiles.hpp"
#include "aggdiff/solver.hpp"

namespace py = pybind11;
using namespace aggdiff;

namespace {

py::array_t<double> to_array(const Field& field) {
  const Grid& g = field.grid();
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), static_cast<py::ssize_t>(g.n()));
  py::array_t<double> out(shape);
  std::copy(field.values().begin(), field.values().end(), out.mutable_data());
  return out;
}

Field from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& values, double extent) {
  if (values.ndim() < 1 || values.ndim() > 2) throw std::invalid_argument("field must be 1D or 2D");
  const auto n = static_cast<std::size_t>(values.shape(0));
  if (values.ndim() == 2 && static_cast<std::size_t>(values.shape(1)) != n)
    throw std::invalid_argument("2D field must be square");
  const Grid grid(static_cast<int>(values.ndim()), n, extent);
  return Field(grid, std::vector<double>(values.data(), values.data() + values.size()));
}

py::dict series_dict(const ObservableSeries& series) {
  py::dict out;
  for (const auto& key : series.columns()) {
    const auto column = series.column(key);
    out[py::str(key)] = py::array_t<double>(static_cast<py::ssize_t>(column.size()), column.data());
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Aggregation-diffusion laboratory core";

  py::register_exception<RunAborted>(m, "RunAborted", PyExc_RuntimeError);

  m.def("gaussian", [](int dim, std::size_t n, double extent, double mass, double sigma) {
        return to_array(aggdiff::gaussian(make_grid(dim, n, extent), mass, sigma));
      },
      py::arg("dim"), py::arg("n"), py::arg("extent"), py::arg("mass") = 1.0, py::arg("sigma") = 0.5);

  m.def("lp_norm", [](const py::array_t<double>& u, double extent, double p) {
        return aggdiff::lp_norm(from_array(u, extent), p);
      },
      py::arg("u"), py::arg("extent"), py::arg("p"));
  m.def("sobolev_seminorm", [](const py::array_t<double>& u, double extent, int order) {
        return aggdiff::sobolev_seminorm(from_array(u, extent), order);
      },
      py::arg("u"), py::arg("extent"), py::arg("m"));

  m.def("parse_config_text", [](const std::string& text) { return format_config(aggdiff::parse_config_text(text)); },
        py::arg("text"), "Validates a key=value config and returns it with defaults filled in.");

  m.def("run", [](const std::string& config_text) {
        const RunConfig config = aggdiff::parse_config_text(config_text);
        RunResult result = [&] {
          py::gil_scoped_release release;
          return aggdiff::run(config);
        }();
        py::dict out;
        out["t_star"] = result.t_star;
        out["series"] = series_dict(result.series);
        out["final"] = to_array(result.final_state.field);
        out["steps"] = result.final_state.steps;
        out["max_boundary_ratio"] = result.max_boundary_ratio;
        return out;
      },
      py::arg("config_text"));

  m.def("fit_exponent", [](const std::vector<std::pair<double, double>>& pairs, double theory, double tolerance,
                           double min_r2) {
        const FitReport r = aggdiff::fit_exponent(pairs, "fit", theory, tolerance, min_r2);
        py::dict out;
        out["slope"] = r.slope;
        out["intercept"] = r.intercept;
        out["r2"] = r.r2;
        out["pass"] = r.pass;
        return out;
      },
      py::arg("pairs"), py::arg("theory") = 0.0, py::arg("tolerance") = 0.0, py::arg("min_r2") = 0.0);

  m.def("gn_solve", [](int N, int order, int beta, double p, double q, double theta) {
        const GNParams g = aggdiff::gn_solve(N, order, beta, p, q, theta);
        return py::make_tuple(g.r, g.relation_residual());
      },
      py::arg("N"), py::arg("m"), py::arg("beta"), py::arg("p"), py::arg("q"), py::arg("theta"),
      "Returns (r, residual of the exponent relation).");
  m.def("gn_ratio", [](const py::array_t<double>& u, double extent, int order, int beta, double p, double q,
                       double theta) {
        const Field f = from_array(u, extent);
        return aggdiff::gn_ratio(f, aggdiff::gn_solve(f.grid().dim(), order, beta, p, q, theta));
      },
      py::arg("u"), py::arg("extent"), py::arg("m"), py::arg("beta"), py::arg("p"), py::arg("q"),
      py::arg("theta"));

  m.def("hls_solve", [](int N, double p, double lambda) {
        const HLSParams h = aggdiff::hls_solve(N, p, lambda);
        return py::make_tuple(h.q, h.relation_residual());
      },
      py::arg("N"), py::arg("p"), py::arg("lambda_"), "Returns (q, residual of the exponent relation).");
  m.def("hls_ratio", [](const py::array_t<double>& u, double extent, double p, double lambda) {
        const Field f = from_array(u, extent);
        return aggdiff::hls_ratio(f, aggdiff::hls_solve(f.grid().dim(), p, lambda));
      },
      py::arg("u"), py::arg("extent"), py::arg("p"), py::arg("lambda_"));
  m.def("hls_sharp_constant", &aggdiff::hls_sharp_constant, py::arg("N"), py::arg("lambda_"));
}
