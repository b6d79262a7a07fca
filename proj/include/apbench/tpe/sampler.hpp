// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apbench/perturb/apply.hpp"
#include "nlohmann/json.hpp"

namespace apbench::tpe {

// Normalized 2-D search coordinates: p1 selects the active perturbation set,
// p2 the shared intensity.
struct SearchPoint {
  double p1 = 0.0;
  double p2 = 0.0;
};

struct Trial {
  SearchPoint point;
  double score = 0.0;  // refusal similarity; lower is a stronger attack
  perturb::PerturbationRecord record;
  std::string response_text;
  int index = 0;
  bool rejected = false;  // gate rejection or infeasible chain; score pinned to 1.0
  std::string reject_reason;
};

enum class BandwidthRule { kSilvermanFloor };

struct TpeConfig {
  int n_startup = 10;       // quasi-random warmup trials
  double quantile = 0.10;   // good/bad split quantile
  int n_candidates = 24;    // samples drawn from l(x) per suggestion
  int budget = 60;          // total trials per sample
  std::uint64_t rng_seed = 0;
  BandwidthRule kde_bandwidth_rule = BandwidthRule::kSilvermanFloor;

  void validate() const;
  nlohmann::json to_json() const;
  static TpeConfig from_json(const nlohmann::json& j);
};

// Proposes the next point. Startup trials come from a seeded Halton sequence;
// afterwards the history splits at the quantile of scores into good/bad sets,
// per-coordinate truncated-Gaussian KDEs l and g are fit, and the candidate
// maximizing l/g among n_candidates draws from l wins. Degenerate splits
// (too few observations, a bad set that would be empty, or all scores equal)
// fall back to the quasi-random stream.
SearchPoint suggest(const std::vector<Trial>& history, const TpeConfig& config);

}  // namespace apbench::tpe
