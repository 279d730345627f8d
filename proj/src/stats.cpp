#include "poshs/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace poshs {

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs at least two pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult r;
  r.df = static_cast<double>(n - 1);
  if (sd == 0.0) {
    // Constant differences: the sign decides.
    r.t = mean < 0.0 ? -INFINITY : (mean > 0.0 ? INFINITY : 0.0);
    r.p_one_sided = mean < 0.0 ? 0.0 : 1.0;
    r.p_two_sided = mean != 0.0 ? 0.0 : 1.0;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(r.df);
  r.p_one_sided = boost::math::cdf(dist, r.t);
  r.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

}  // namespace poshs
