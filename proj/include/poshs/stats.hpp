#pragma once

#include <span>

namespace poshs {

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_one_sided = 1.0;  // H1: mean(a - b) < 0
  double p_two_sided = 1.0;
};

/// Paired Student t-test on a - b. Needs at least two pairs.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace poshs
