#pragma once

#include <string>
#include <vector>

#include "aggdiff/field.hpp"

namespace aggdiff {

/// Gagliardo-Nirenberg exponents:
///   ||v||_{W^{beta,r}} <= C ||v||_{W^{m,p}}^theta ||v||_q^(1-theta),
///   N/r = beta - theta (m - N/p) + (1 - theta) N/q,   beta/m <= theta < 1.
/// Infinite exponents are represented by kInfinity.
struct GNParams {
  int N = 1;
  int m = 1;
  int beta = 0;
  double p = 2.0;
  double q = 1.0;
  double theta = 0.0;
  double r = 0.0;

  /// Residual of the defining relation with r substituted back.
  double relation_residual() const;
};

GNParams gn_solve(int N, int m, int beta, double p, double q, double theta);

/// ||v||_{W^{beta,r}} / (||v||_{W^{m,p}}^theta ||v||_q^(1-theta)).
double gn_ratio(const Field& field, const GNParams& params);

/// Hardy-Littlewood-Sobolev exponents: 1/p + lambda/N = 1/q + 1.
struct HLSParams {
  int N = 1;
  double p = 2.0;
  double q = 2.0;
  double lambda = 0.5;

  double relation_residual() const;
};

HLSParams hls_solve(int N, double p, double lambda);

/// || |x|^-lambda * v ||_q / ||v||_p.
double hls_ratio(const Field& field, const HLSParams& params);

/// Best constant of the HLS inequality on the diagonal p = 2N / (2N - lambda),
/// where it is known in closed form.
double hls_sharp_constant(int N, double lambda);

/// One line of the inequality report.
struct InequalityCheck {
  std::string name;
  std::string params;
  double value = 0.0;      // measured quantity
  double threshold = 0.0;  // bound it is compared against
  bool pass = false;
};

/// Exponent round trips, homogeneity, dilation stability and ensemble
/// statistics for the GN and HLS inequalities used in the energy estimates.
std::vector<InequalityCheck> inequality_suite(unsigned seed = 20201);

}  // namespace aggdiff
