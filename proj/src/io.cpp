#include "aggdiff/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace aggdiff {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw std::invalid_argument(key + ": cannot parse '" + value + "' as " + expected);
}

double parse_double(const std::string& key, const std::string& value) {
  if (value == "inf" || value == "infinity") return kInfinity;
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a real number");
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "a non-negative integer");
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad_value(key, value, "an integer");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) bad_value(key, value, "a comma-separated list");
  return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "dim") config.dim = parse_int(key, value);
    else if (key == "n") config.n = value == "auto" ? 0 : parse_size(key, value);
    else if (key == "L") config.extent = parse_double(key, value);
    else if (key == "L_per_eps") config.extent_per_eps = parse_double(key, value);
    else if (key == "eps") config.eps = parse_double(key, value);
    else if (key == "T_star") config.t_star = value == "auto" ? std::nullopt : std::optional(parse_double(key, value));
    else if (key == "cfl") config.cfl = parse_double(key, value);
    else if (key == "sample_count") config.sample_count = parse_size(key, value);
    else if (key == "m_max") config.m_max = parse_int(key, value);
    else if (key == "p_list") config.p_list = parse_list(key, value);
    else if (key == "profile") {
      if (value == "gaussian") config.initial.profile = Profile::gaussian;
      else if (value == "pair") config.initial.profile = Profile::gaussian_pair;
      else bad_value(key, value, "one of gaussian, pair");
    }
    else if (key == "mass") config.initial.mass = parse_double(key, value);
    else if (key == "sigma") config.initial.sigma = parse_double(key, value);
    else if (key == "center") config.initial.center = parse_double(key, value);
    else if (key == "boundary_tol") config.boundary_tol = parse_double(key, value);
    else if (key == "positivity_tol") config.positivity_tol = parse_double(key, value);
    else if (key == "cells_per_eps") config.cells_per_eps = parse_double(key, value);
    else if (key == "n_max") config.n_max = parse_size(key, value);
    else throw std::invalid_argument(key + ": unknown key");
  }
  config.validate();
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::invalid_argument("config file not found: " + path.string());
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string format_config(const RunConfig& config) {
  std::ostringstream out;
  out << "dim=" << config.dim << '\n'
      << "n=" << (config.n ? std::to_string(config.n) : "auto") << '\n'
      << "L=" << format_double(config.extent) << '\n'
      << "L_per_eps=" << format_double(config.extent_per_eps) << '\n'
      << "eps=" << format_double(config.eps) << '\n'
      << "T_star=" << (config.t_star ? format_double(*config.t_star) : "auto") << '\n'
      << "cfl=" << format_double(config.cfl) << '\n'
      << "sample_count=" << config.sample_count << '\n'
      << "m_max=" << config.m_max << '\n'
      << "p_list=";
  for (std::size_t k = 0; k < config.p_list.size(); ++k) out << (k ? "," : "") << format_p(config.p_list[k]);
  out << '\n'
      << "profile=" << (config.initial.profile == Profile::gaussian ? "gaussian" : "pair") << '\n'
      << "mass=" << format_double(config.initial.mass) << '\n'
      << "sigma=" << format_double(config.initial.sigma) << '\n'
      << "center=" << format_double(config.initial.center) << '\n'
      << "boundary_tol=" << format_double(config.boundary_tol) << '\n'
      << "positivity_tol=" << format_double(config.positivity_tol) << '\n'
      << "cells_per_eps=" << format_double(config.cells_per_eps) << '\n'
      << "n_max=" << config.n_max << '\n';
  return out.str();
}

void write_series_csv(const ObservableSeries& series, const std::filesystem::path& path) {
  auto out = open_output(path);
  const auto columns = series.columns();
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto row = series.row(k);
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ObservableSeries read_series_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "t" || header[1] != "mass" || header[2] != "moment1")
    throw std::runtime_error(path.string() + ": unexpected header");

  std::vector<double> p_list;
  int m_max = -1;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const auto& h = header[c];
    if (h.rfind("Lp_", 0) == 0) p_list.push_back(parse_double(h, h.substr(3)));
    else if (h.rfind("Hm_", 0) == 0) m_max = parse_int(h, h.substr(3));
    else throw std::runtime_error(path.string() + ": unknown column " + h);
  }
  ObservableSeries series(p_list, std::max(m_max, 0));
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row");
    ObservableRecord r;
    r.t = parse_double("t", cells[0]);
    r.mass = parse_double("mass", cells[1]);
    r.first_moment = parse_double("moment1", cells[2]);
    std::size_t c = 3;
    for (double p : p_list) r.lp[p] = parse_double(header[c], cells[c]), ++c;
    for (int m = 0; m <= m_max; ++m) r.hm[m] = parse_double(header[c], cells[c]), ++c;
    series.append(std::move(r));
  }
  return series;
}

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "eps,n,L,dim,t_star";
  for (int m = 0; m <= sweep.m_max; ++m) out << ",int_Hm_" << m << ",sup_Hm_" << m << ",init_Hm_" << m;
  for (double p : sweep.p_list) out << ",int_Lp_" << format_p(p);
  for (int m = 0; m < sweep.m_max; ++m) out << ",length_scale_" << m;
  out << ",mass_drift,status\n";
  const auto nan = std::nan("");
  for (const auto& row : sweep.rows) {
    out << format_double(row.eps) << ',' << row.n << ',' << format_double(row.extent) << ',' << sweep.dim << ','
        << format_double(row.t_star);
    auto at = [&](const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : nan; };
    for (int m = 0; m <= sweep.m_max; ++m) {
      const auto k = static_cast<std::size_t>(m);
      out << ',' << format_double(at(row.hm_integral, k)) << ',' << format_double(at(row.hm_sup, k)) << ','
          << format_double(at(row.hm_initial, k));
    }
    for (std::size_t k = 0; k < sweep.p_list.size(); ++k) out << ',' << format_double(at(row.lp_integral, k));
    for (int m = 0; m < sweep.m_max; ++m)
      out << ',' << format_double(at(row.length_scale, static_cast<std::size_t>(m)));
    out << ',' << format_double(row.mass_drift) << ',' << (row.failed ? "failed" : "ok") << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
  for (const char* required : {"eps", "n", "L", "dim", "t_star", "mass_drift", "status"})
    if (!col.count(required)) throw std::runtime_error(path.string() + ": missing column " + required);

  SweepResult sweep;
  for (const auto& h : header) {
    if (h.rfind("int_Hm_", 0) == 0) sweep.m_max = std::max(sweep.m_max, parse_int(h, h.substr(7)));
    if (h.rfind("int_Lp_", 0) == 0) sweep.p_list.push_back(parse_double(h, h.substr(7)));
  }
  bool first = true;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) throw std::runtime_error(path.string() + ": ragged row");
    auto num = [&](const std::string& key) {
      const auto& v = cells[col.at(key)];
      return v == "nan" || v == "-nan" ? std::nan("") : parse_double(key, v);
    };
    SweepRow row;
    row.eps = num("eps");
    row.n = parse_size("n", cells[col["n"]]);
    row.extent = num("L");
    const int dim = parse_int("dim", cells[col["dim"]]);
    if (first) sweep.dim = dim, first = false;
    row.t_star = num("t_star");
    for (int m = 0; m <= sweep.m_max; ++m) {
      const auto s = std::to_string(m);
      row.hm_integral.push_back(num("int_Hm_" + s));
      row.hm_sup.push_back(num("sup_Hm_" + s));
      row.hm_initial.push_back(num("init_Hm_" + s));
    }
    for (double p : sweep.p_list) row.lp_integral.push_back(num("int_Lp_" + format_p(p)));
    for (int m = 0; m < sweep.m_max; ++m) row.length_scale.push_back(num("length_scale_" + std::to_string(m)));
    row.mass_drift = num("mass_drift");
    row.failed = cells[col["status"]] != "ok";
    sweep.rows.push_back(std::move(row));
  }
  std::sort(sweep.rows.begin(), sweep.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });
  return sweep;
}

void write_fit_reports_json(const std::vector<FitReport>& reports, const std::filesystem::path& path) {
  nlohmann::json array = nlohmann::json::array();
  auto finite_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  for (const auto& r : reports) {
    array.push_back({{"id", r.id},
                     {"slope", finite_or_null(r.slope)},
                     {"intercept", finite_or_null(r.intercept)},
                     {"r2", finite_or_null(r.r2)},
                     {"theory_slope", r.theory_slope},
                     {"tolerance", r.tolerance},
                     {"min_r2", r.min_r2},
                     {"points", r.points},
                     {"constant_ratio", finite_or_null(r.constant_ratio)},
                     {"ratio_threshold", r.ratio_threshold},
                     {"pass", r.pass},
                     {"note", r.note}});
  }
  auto out = open_output(path);
  out << array.dump(2) << '\n';
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string loglog_svg(const FitReport& report, const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("emit_loglog_svg: needs at least 2 points");
  for (const auto& [e, v] : pairs)
    if (!(e > 0.0) || !(v > 0.0)) throw std::invalid_argument("emit_loglog_svg: data must be positive");

  constexpr double width = 640, height = 480, left = 80, right = 30, top = 50, bottom = 60;
  double x_lo = kInfinity, x_hi = -kInfinity, y_lo = kInfinity, y_hi = -kInfinity;
  for (const auto& [e, v] : pairs) {
    x_lo = std::min(x_lo, std::log10(e));
    x_hi = std::max(x_hi, std::log10(e));
    y_lo = std::min(y_lo, std::log10(v));
    y_hi = std::max(y_hi, std::log10(v));
  }
  auto pad = [](double& lo, double& hi) {
    const double span = std::max(hi - lo, 0.2);
    lo -= 0.08 * span;
    hi += 0.08 * span;
  };
  pad(x_lo, x_hi);
  pad(y_lo, y_hi);
  auto sx = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * (width - left - right); };
  auto sy = [&](double ly) { return height - bottom - (ly - y_lo) / (y_hi - y_lo) * (height - top - bottom); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" << xml_escape(report.id) << "</text>\n";
  // Axes box and decade ticks.
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
      << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x_lo)); d <= static_cast<int>(std::floor(x_hi)); ++d) {
    svg << "<line x1=\"" << num(sx(d)) << "\" y1=\"" << height - bottom << "\" x2=\"" << num(sx(d)) << "\" y2=\""
        << height - bottom + 6 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << num(sx(d)) << "\" y=\"" << height - bottom + 22
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y_lo)); d <= static_cast<int>(std::floor(y_hi)); ++d) {
    svg << "<line x1=\"" << left - 6 << "\" y1=\"" << num(sy(d)) << "\" x2=\"" << left << "\" y2=\"" << num(sy(d))
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 10 << "\" y=\"" << num(sy(d) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << d << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">eps</text>\n";

  // Fitted line: ln v = intercept + slope ln eps, i.e. log10 v = intercept/ln10 + slope log10 eps.
  const double ln10 = std::log(10.0);
  auto fit_y = [&](double lx) { return report.intercept / ln10 + report.slope * lx; };
  svg << "<line x1=\"" << num(sx(x_lo)) << "\" y1=\"" << num(sy(fit_y(x_lo))) << "\" x2=\"" << num(sx(x_hi))
      << "\" y2=\"" << num(sy(fit_y(x_hi))) << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
  for (const auto& [e, v] : pairs)
    svg << "<circle cx=\"" << num(sx(std::log10(e))) << "\" cy=\"" << num(sy(std::log10(v)))
        << "\" r=\"4\" fill=\"#2c3e50\"/>\n";

  svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 20 << "\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape("fitted slope = " + num(report.slope, 4) + ", theoretical slope = " +
                    num(report.theory_slope, 4) + ", R2 = " + num(report.r2, 4))
      << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

void emit_loglog_svg(const FitReport& report, const std::vector<std::pair<double, double>>& pairs,
                     const std::filesystem::path& path) {
  const std::string text = loglog_svg(report, pairs);
  auto out = open_output(path);
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw std::runtime_error("snapshot: truncated file");
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | bytes[b];
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

}  // namespace

void write_snapshot(const SolverState& state, const std::filesystem::path& path) {
  auto out = open_output(path);
  const Grid& grid = state.field.grid();
  put_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(grid.dim())));
  put_u64(out, static_cast<std::uint64_t>(grid.n()));
  put_f64(out, grid.extent());
  put_f64(out, state.t);
  put_f64(out, state.eps);
  for (double v : state.field.values()) put_f64(out, v);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  auto in = open_input(path);
  const auto dim = static_cast<int>(static_cast<std::int64_t>(get_u64(in)));
  const auto n = static_cast<std::size_t>(get_u64(in));
  const double extent = get_f64(in);
  const double t = get_f64(in);
  const double eps = get_f64(in);
  const Grid grid(dim, n, extent);
  std::vector<double> values(grid.cells());
  for (double& v : values) v = get_f64(in);
  return Snapshot{Field(grid, std::move(values)), t, eps};
}

}  // namespace aggdiff
