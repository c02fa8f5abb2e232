// Modified Bessel function of the first kind, I_k(x), by power series:
//   I_k(x) = sum_m (x/2)^(2m+k) / (m! (m+k)!)
// Terms are generated by ratio updates and summation stops once the term
// drops below 1e-16 of the running sum.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spgat {

inline double bessel_i(int order, double x) {
  if (order < 0 || order > 128 || std::fabs(x) > 64.0)
    throw std::domain_error("bessel_i: supported box is order in [0,128], |x| <= 64; got order=" +
                            std::to_string(order) + ", x=" + std::to_string(x));
  const double sign = (x < 0.0 && order % 2 == 1) ? -1.0 : 1.0;  // I_k(-x) = (-1)^k I_k(x)
  x = std::fabs(x);
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;

  double term = 1.0;  // (x/2)^k / k!
  for (int i = 1; i <= order; ++i) term *= (x / 2.0) / i;
  double sum = term;
  const double q = x * x / 4.0;
  for (int m = 1; m < 600; ++m) {
    term *= q / (static_cast<double>(m) * (m + order));
    sum += term;
    if (std::fabs(term) <= 1e-16 * std::fabs(sum)) break;
  }
  return sign * sum;
}

// Look-up table [I_0(s), ..., I_max_order(s)]; coefficient construction
// afterwards does no series evaluation.
inline std::vector<double> bessel_table(double s, int max_order) {
  if (max_order < 0 || max_order > 128 || std::fabs(s) > 64.0)
    throw std::domain_error("bessel_table: supported box is order in [0,128], |s| <= 64; got order=" +
                            std::to_string(max_order) + ", s=" + std::to_string(s));
  std::vector<double> table(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k) table[k] = bessel_i(k, s);
  return table;
}

}  // namespace spgat
