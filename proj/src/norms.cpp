#include "aggdiff/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fft.hpp"

namespace aggdiff {

namespace {

// Neumaier-compensated sum; mass drift checks sit near machine precision.
template <typename F>
double compensated_sum(std::size_t count, F&& term) {
  double sum = 0.0, carry = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = term(k);
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

}  // namespace

double mass(const Field& field) {
  const auto u = field.values();
  return field.grid().cell_volume() * compensated_sum(u.size(), [&](std::size_t k) { return u[k]; });
}

double first_moment(const Field& field) {
  const Grid& grid = field.grid();
  const std::size_t n = grid.n();
  if (grid.dim() == 1) {
    return grid.cell_volume() *
           compensated_sum(n, [&](std::size_t i) { return std::abs(grid.coordinate(i)) * field.at(i); });
  }
  return grid.cell_volume() * compensated_sum(n * n, [&](std::size_t k) {
           const double x1 = grid.coordinate(k / n), x2 = grid.coordinate(k % n);
           return std::hypot(x1, x2) * field[k];
         });
}

double lp_norm(const Field& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto u = field.values();
  if (std::isinf(p)) {
    double peak = 0.0;
    for (double v : u) peak = std::max(peak, std::abs(v));
    return peak;
  }
  const double volume = field.grid().cell_volume();
  if (p == 1.0) {
    return volume * compensated_sum(u.size(), [&](std::size_t k) { return std::abs(u[k]); });
  }
  if (p == 2.0) {
    return std::sqrt(volume * compensated_sum(u.size(), [&](std::size_t k) { return u[k] * u[k]; }));
  }
  // Scale by the peak so large p cannot overflow.
  double peak = 0.0;
  for (double v : u) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  const double s = compensated_sum(u.size(), [&](std::size_t k) { return std::pow(std::abs(u[k]) / peak, p); });
  return peak * std::pow(volume * s, 1.0 / p);
}

std::vector<double> sobolev_seminorms(const Field& field, int m_max) {
  if (m_max < 0) throw std::invalid_argument("sobolev_seminorm: m must be non-negative");
  const Grid& grid = field.grid();
  auto& fft = detail::fft_for(grid.dim(), grid.n());
  std::vector<std::complex<double>> coeffs(fft.complex_size());
  fft.forward(field.values(), coeffs);

  const std::size_t n = grid.n();
  const std::size_t half = n / 2 + 1;
  std::vector<double> sums(static_cast<std::size_t>(m_max) + 1, 0.0);
  auto accumulate = [&](double k2, double weight, std::complex<double> c) {
    double power = weight * std::norm(c);
    for (auto& s : sums) {
      s += power;
      power *= k2;
    }
  };
  // Interior half-spectrum columns stand for a conjugate pair.
  auto column_weight = [&](std::size_t j) { return (j == 0 || j == n / 2) ? 1.0 : 2.0; };
  if (grid.dim() == 1) {
    for (std::size_t j = 0; j < half; ++j) {
      const double k = grid.wavenumber(j);
      accumulate(k * k, column_weight(j), coeffs[j]);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double k1 = grid.wavenumber(i);
      for (std::size_t j = 0; j < half; ++j) {
        const double k2 = grid.wavenumber(j);
        accumulate(k1 * k1 + k2 * k2, column_weight(j), coeffs[i * half + j]);
      }
    }
  }
  // |u_hat|^2 = h^(2 dim) |raw|^2, and the sum carries L^-dim: h^dim / n^dim overall.
  const double scale = grid.cell_volume() / static_cast<double>(grid.cells());
  std::vector<double> out(sums.size());
  for (std::size_t m = 0; m < sums.size(); ++m) out[m] = std::sqrt(scale * sums[m]);
  return out;
}

double sobolev_seminorm(const Field& field, int m) {
  if (m < 0) throw std::invalid_argument("sobolev_seminorm: m must be non-negative");
  return sobolev_seminorms(field, m).back();
}

double wmp_seminorm(const Field& field, int m, double p, int max_order) {
  if (m < 0) throw std::invalid_argument("wmp_seminorm: m must be non-negative");
  if (m == 0) return lp_norm(field, p);
  double total = 0.0;
  for (const auto& index : multiindices(field.grid().dim(), m))
    total += lp_norm(spectral_derivative(field, index, max_order), p);
  return total;
}

std::string lp_key(double p) {
  if (std::isinf(p)) return "Lp_inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "Lp_%g", p);
  return buf;
}

std::string hm_key(int m) { return "Hm_" + std::to_string(m); }

ObservableRecord observe(const Field& field, double t, const std::vector<double>& p_list, int m_max) {
  ObservableRecord record;
  record.t = t;
  record.mass = mass(field);
  record.first_moment = first_moment(field);
  for (double p : p_list) record.lp[p] = lp_norm(field, p);
  const auto hm = sobolev_seminorms(field, m_max);
  for (int m = 0; m <= m_max; ++m) record.hm[m] = hm[static_cast<std::size_t>(m)];
  return record;
}

ObservableSeries::ObservableSeries(std::vector<double> p_list, int m_max)
    : p_list_(std::move(p_list)), m_max_(m_max) {
  if (m_max_ < 0) throw std::invalid_argument("series: m_max must be non-negative");
  for (double p : p_list_)
    if (!(p >= 1.0)) throw std::invalid_argument("series: p values must be >= 1");
}

void ObservableSeries::append(ObservableRecord record) {
  if (!records_.empty() && record.t < records_.back().t)
    throw std::invalid_argument("series: records must be appended in time order");
  records_.push_back(std::move(record));
}

std::vector<std::string> ObservableSeries::columns() const {
  std::vector<std::string> out{"t", "mass", "moment1"};
  for (double p : p_list_) out.push_back(lp_key(p));
  for (int m = 0; m <= m_max_; ++m) out.push_back(hm_key(m));
  return out;
}

std::vector<double> ObservableSeries::times() const { return column("t"); }

std::vector<double> ObservableSeries::column(const std::string& key) const {
  std::vector<double> out;
  out.reserve(records_.size());
  auto collect = [&](auto&& get) {
    for (const auto& r : records_) out.push_back(get(r));
    return out;
  };
  if (key == "t") return collect([](const ObservableRecord& r) { return r.t; });
  if (key == "mass") return collect([](const ObservableRecord& r) { return r.mass; });
  if (key == "moment1") return collect([](const ObservableRecord& r) { return r.first_moment; });
  for (double p : p_list_)
    if (key == lp_key(p)) return collect([p](const ObservableRecord& r) { return r.lp.at(p); });
  for (int m = 0; m <= m_max_; ++m)
    if (key == hm_key(m)) return collect([m](const ObservableRecord& r) { return r.hm.at(m); });
  throw std::invalid_argument("series: unknown column '" + key + "'");
}

std::vector<double> ObservableSeries::row(std::size_t k) const {
  const auto& r = records_.at(k);
  std::vector<double> out{r.t, r.mass, r.first_moment};
  for (double p : p_list_) out.push_back(r.lp.at(p));
  for (int m = 0; m <= m_max_; ++m) out.push_back(r.hm.at(m));
  return out;
}

double time_integral(const ObservableSeries& series, const std::string& key) {
  if (series.empty()) throw std::invalid_argument("time_integral: empty series");
  const auto t = series.times();
  const auto y = series.column(key);
  double total = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) total += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
  return total;
}

double time_average(const ObservableSeries& series, const std::string& key) {
  if (series.empty()) throw std::invalid_argument("time_average: empty series");
  const auto& records = series.records();
  const double span = records.back().t - records.front().t;
  if (span <= 0.0) return series.column(key).front();
  return time_integral(series, key) / span;
}

double length_scale(const ObservableSeries& series, int m) {
  if (series.empty()) throw std::invalid_argument("length_scale: empty series");
  if (series.size() < 16) throw std::invalid_argument("length_scale: needs at least 16 samples");
  if (m < 0 || m + 1 > series.m_max()) throw std::invalid_argument("length_scale: m + 1 exceeds m_max");
  return time_average(series, hm_key(m)) / time_average(series, hm_key(m + 1));
}

}  // namespace aggdiff
