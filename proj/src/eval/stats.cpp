// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/eval/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "apbench/errors.hpp"

namespace apbench::eval {

namespace {

// Lentz continued fraction for the regularized incomplete beta function.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * betacf(a, b, x) / a;
  }
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double t_test_p_value(double t, std::size_t df) {
  if (df == 0) return 1.0;
  if (!std::isfinite(t)) return 0.0;
  const double nu = static_cast<double>(df);
  return betai(nu / 2.0, 0.5, nu / (nu + t * t));
}

PairedTTest paired_t_test(std::span<const double> base, std::span<const double> variant) {
  if (base.size() != variant.size()) {
    throw Error("paired_t_test: series lengths differ");
  }
  const std::size_t n = base.size();
  if (n < 2) throw InsufficientPairs("paired t-test needs at least 2 pairs");

  PairedTTest result;
  result.n = n;
  std::vector<double> diffs(n);
  for (std::size_t i = 0; i < n; ++i) diffs[i] = variant[i] - base[i];

  // Detect identical differences before accumulating, so summation rounding
  // cannot turn an exactly-constant series into a near-zero variance.
  bool all_equal = true;
  for (double d : diffs) all_equal = all_equal && d == diffs[0];

  double mean = 0.0;
  for (double d : diffs) mean += d;
  mean /= static_cast<double>(n);
  if (all_equal) mean = diffs[0];
  result.mean_delta = mean;

  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (all_equal || sd == 0.0) {
    result.zero_variance = true;
    result.t_statistic = mean == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    result.p_value = mean == 0.0 ? 1.0 : 0.0;
    return result;
  }
  result.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
  result.p_value = t_test_p_value(result.t_statistic, n - 1);
  return result;
}

}  // namespace apbench::eval
