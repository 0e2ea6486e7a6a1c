#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "aggdiff/field.hpp"

namespace aggdiff {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// h^dim * sum u.
double mass(const Field& field);

/// h^dim * sum |x| u.
double first_moment(const Field& field);

/// (h^dim sum |u|^p)^(1/p); p = infinity gives max |u|.
double lp_norm(const Field& field, double p);

/// Homogeneous Sobolev seminorm from the spectrum:
/// (L^-dim sum_j |k_j|^(2m) |u_hat_j|^2)^(1/2).
double sobolev_seminorm(const Field& field, int m);

/// Seminorms for m = 0..m_max from a single transform.
std::vector<double> sobolev_seminorms(const Field& field, int m_max);

/// sum over |i| = m of || d^i u ||_p, with derivatives taken spectrally.
double wmp_seminorm(const Field& field, int m, double p, int max_order = 4);

/// Column name for an L^p norm: "Lp_2", "Lp_1.5", "Lp_inf".
std::string lp_key(double p);

/// Column name for a Sobolev seminorm: "Hm_1".
std::string hm_key(int m);

struct ObservableRecord {
  double t = 0.0;
  double mass = 0.0;
  double first_moment = 0.0;
  std::map<double, double> lp;  // p -> ||u||_p
  std::map<int, double> hm;     // m -> ||u||_{H^m}
};

ObservableRecord observe(const Field& field, double t, const std::vector<double>& p_list,
                         int m_max);

/// Time-stamped observables with a fixed column layout:
/// t, mass, moment1, Lp_<p> for p in p_list, Hm_<m> for m = 0..m_max.
class ObservableSeries {
 public:
  ObservableSeries(std::vector<double> p_list, int m_max);

  const std::vector<double>& p_list() const { return p_list_; }
  int m_max() const { return m_max_; }
  const std::vector<ObservableRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  void append(ObservableRecord record);

  std::vector<std::string> columns() const;
  std::vector<double> times() const;

  /// Values of one column ("t", "mass", "moment1", "Lp_2", "Hm_1", ...).
  std::vector<double> column(const std::string& key) const;

  /// Full row in column order.
  std::vector<double> row(std::size_t k) const;

 private:
  std::vector<double> p_list_;
  int m_max_;
  std::vector<ObservableRecord> records_;
};

/// Trapezoid integral of a column over the sampled time window.
double time_integral(const ObservableSeries& series, const std::string& key);

/// time_integral divided by the window length.  A single record returns its value.
double time_average(const ObservableSeries& series, const std::string& key);

/// <||u||_{H^m}> / <||u||_{H^(m+1)}> over the series window.  Needs at least
/// 16 records and m + 1 <= m_max.
double length_scale(const ObservableSeries& series, int m);

}  // namespace aggdiff
