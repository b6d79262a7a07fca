// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apbench/bench/manifest.hpp"
#include "apbench/bench/run_config.hpp"
#include "apbench/perturb/kinds.hpp"

namespace apbench::bench {

// Exit codes shared by every command: 0 success, 1 partial per-sample
// failures, 2 configuration error (raised as exceptions; the CLI maps them).
constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitConfig = 2;

struct PerturbOptions {
  // Fixed chain applied to every sample; seeds are derived per sample from
  // the global seed.
  std::vector<std::pair<perturb::PerturbationKind, double>> chain;
};
int cmd_perturb(const RunConfig& config, const PerturbOptions& options);

int cmd_gate(const RunConfig& config);

int cmd_optimize(const RunConfig& config);

struct EvaluateOptions {
  std::filesystem::path baseline_records;  // optional: paired comparison input
};
int cmd_evaluate(const RunConfig& config, const EvaluateOptions& options);

struct CalibrateOptions {
  std::string target;  // perturbation kind name or "overlay-rounds"
  double sweep_lo = 0.0;
  double sweep_hi = 0.0;
  int sweep_steps = 0;
  int rounds = 13;
  std::string sample_id;  // default: first manifest entry
};
int cmd_calibrate(const RunConfig& config, const CalibrateOptions& options);

struct IngestOptions {
  std::filesystem::path text_manifest;
  // Shell template with {id}, {text}, {out} placeholders; run once per entry.
  std::string command_template;
};
int cmd_ingest(const RunConfig& config, const IngestOptions& options);

}  // namespace apbench::bench
