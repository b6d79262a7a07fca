// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/tpe/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apbench/errors.hpp"
#include "apbench/rng.hpp"
#include "apbench/tpe/halton.hpp"

namespace apbench::tpe {

namespace {

constexpr double kBandwidthFloor = 0.05;
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

// Gaussian truncated to [0, 1], renormalized by the in-interval mass.
double truncated_pdf(double v, double mu, double sigma) {
  if (v < 0.0 || v > 1.0) return 0.0;
  const double mass = normal_cdf((1.0 - mu) / sigma) - normal_cdf((0.0 - mu) / sigma);
  if (mass < 1e-12) return 0.0;
  return normal_pdf((v - mu) / sigma) / (sigma * mass);
}

struct CoordSet {
  std::vector<double> values;
  double sigma = kBandwidthFloor;
};

// Silverman-style bandwidth with a floor that prevents degenerate spikes.
double bandwidth(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return kBandwidthFloor;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                      static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);
  const double silverman = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  return std::max(kBandwidthFloor, silverman);
}

// Mixture of truncated Gaussians centered on the observations plus one
// uniform component (weight of one pseudo-observation).
double log_density_1d(double v, const CoordSet& set) {
  double acc = 1.0;  // uniform prior component, density 1 on [0, 1]
  for (double center : set.values) {
    acc += truncated_pdf(v, center, set.sigma);
  }
  return std::log(acc / static_cast<double>(set.values.size() + 1));
}

SearchPoint quasi_random_point(std::size_t trial_index, const TpeConfig& config) {
  const std::uint64_t idx = halton_offset(config.rng_seed) + trial_index;
  return SearchPoint{halton(idx, 2), halton(idx, 3)};
}

}  // namespace

void TpeConfig::validate() const {
  if (quantile <= 0.0 || quantile >= 1.0) throw Error("tpe quantile must lie in (0, 1)");
  if (n_startup < 1) throw Error("tpe n_startup must be >= 1");
  if (n_candidates < 1) throw Error("tpe n_candidates must be >= 1");
  // budget == n_startup is a valid startup-only run
  if (budget < 1) throw Error("tpe budget must be >= 1");
}

nlohmann::json TpeConfig::to_json() const {
  return nlohmann::json{{"n_startup", n_startup},
                        {"quantile", quantile},
                        {"n_candidates", n_candidates},
                        {"budget", budget},
                        {"rng_seed", rng_seed},
                        {"kde_bandwidth_rule", "silverman-floor-0.05"}};
}

TpeConfig TpeConfig::from_json(const nlohmann::json& j) {
  TpeConfig cfg;
  cfg.n_startup = j.value("n_startup", cfg.n_startup);
  cfg.quantile = j.value("quantile", cfg.quantile);
  cfg.n_candidates = j.value("n_candidates", cfg.n_candidates);
  cfg.budget = j.value("budget", cfg.budget);
  cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
  cfg.validate();
  return cfg;
}

SearchPoint suggest(const std::vector<Trial>& history, const TpeConfig& config) {
  config.validate();
  const std::size_t t = history.size();
  for (const Trial& trial : history) {
    if (!std::isfinite(trial.score)) throw Error("tpe history contains non-finite score");
  }

  if (t < static_cast<std::size_t>(config.n_startup)) {
    return quasi_random_point(t, config);
  }

  // Quantile rank (at least 2) fixes the threshold value y'; the good set is
  // strictly below it, so score plateaus and sentinel ties land in the bad
  // density instead of becoming a self-reinforcing attractor in l.
  const std::size_t boundary_rank = std::max<std::size_t>(
      2, static_cast<std::size_t>(
             std::ceil(config.quantile * static_cast<double>(t))));
  if (boundary_rank >= t) return quasi_random_point(t, config);

  std::vector<double> sorted_scores(t);
  for (std::size_t i = 0; i < t; ++i) sorted_scores[i] = history[i].score;
  std::sort(sorted_scores.begin(), sorted_scores.end());
  const double threshold = sorted_scores[boundary_rank - 1];

  CoordSet good[2], bad[2];
  for (const Trial& tr : history) {
    CoordSet* target = tr.score < threshold ? good : bad;
    target[0].values.push_back(tr.point.p1);
    target[1].values.push_back(tr.point.p2);
  }
  // Best score is a plateau: nothing is strictly better, so explore.
  if (good[0].values.empty()) return quasi_random_point(t, config);
  const std::size_t n_good = good[0].values.size();
  for (int d = 0; d < 2; ++d) {
    good[d].sigma = bandwidth(good[d].values);
    bad[d].sigma = bandwidth(bad[d].values);
  }

  DeterministicRng rng(mix_seed(config.rng_seed, 0x74706573ULL ^ t));
  SearchPoint best{};
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < config.n_candidates; ++c) {
    SearchPoint cand{};
    // Component index n_good selects the uniform prior.
    const std::size_t comp = rng.uniform_index(n_good + 1);
    for (int d = 0; d < 2; ++d) {
      double v;
      if (comp == n_good) {
        v = rng.uniform01();
      } else {
        const double mu = good[d].values[comp];
        const double sigma = good[d].sigma;
        v = mu + sigma * rng.normal();
        for (int tries = 0; (v < 0.0 || v > 1.0) && tries < 64; ++tries) {
          v = mu + sigma * rng.normal();
        }
        v = std::clamp(v, 0.0, 1.0);
      }
      (d == 0 ? cand.p1 : cand.p2) = v;
    }
    const double log_l = log_density_1d(cand.p1, good[0]) + log_density_1d(cand.p2, good[1]);
    const double log_g = log_density_1d(cand.p1, bad[0]) + log_density_1d(cand.p2, bad[1]);
    const double ratio = log_l - log_g;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = cand;
    }
  }
  return best;
}

}  // namespace apbench::tpe
