// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <span>

namespace apbench::eval {

// Two-sided p-value of Student's t with df degrees of freedom, via the
// regularized incomplete beta function.
double t_test_p_value(double t, std::size_t df);

struct PairedTTest {
  double mean_delta = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  bool zero_variance = false;  // all differences identical
};

// Paired two-tailed t-test of (variant - base) differences. Throws
// InsufficientPairs for fewer than 2 pairs. Zero-variance differences give
// p = 1 when the mean delta is 0, else p = 0, with the flag set.
PairedTTest paired_t_test(std::span<const double> base, std::span<const double> variant);

}  // namespace apbench::eval
