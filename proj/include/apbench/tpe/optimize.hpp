// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <vector>

#include "apbench/gate/gate.hpp"
#include "apbench/model/client.hpp"
#include "apbench/refusal/reference_set.hpp"
#include "apbench/tpe/decode.hpp"
#include "apbench/tpe/sampler.hpp"

namespace apbench::tpe {

struct OptimizeContext {
  model::ModelClient* model = nullptr;
  const refusal::RefusalReferenceSet* refs = nullptr;
  refusal::Embedder* embedder = nullptr;
  // When set, every perturbed candidate must pass the semantic gate; rejected
  // trials keep the worst-possible score 1.0 so the optimizer learns to avoid
  // meaning-destroying regions.
  const gate::GateConfig* gate_config = nullptr;
  perturb::SafeRanges ranges;
  const perturb::NoiseBank* noise_bank = nullptr;
  TpeConfig tpe;
};

struct OptimizationResult {
  std::string sample_id;
  std::vector<Trial> trials;
  int best_index = -1;  // argmin score; -1 when no trial ran
  bool aborted = false;
  std::string abort_reason;

  const Trial& best() const;
  nlohmann::json to_json() const;
};

// Decode -> perturb -> (gate) -> model -> refusal similarity for one point.
// Infeasible chains and gate rejections come back as rejected trials with the
// sentinel score 1.0; anything else (model/scorer transport failure) throws.
Trial evaluate_trial(const SearchPoint& point, int index, const std::string& sample_id,
                     const std::string& original_text, const audio::AudioBuffer& original,
                     const OptimizeContext& ctx);

// Runs the full TPE loop for one sample. A ModelUnavailable (or other
// binding) failure aborts the sample with the partial history preserved.
OptimizationResult optimize(const std::string& sample_id, const std::string& original_text,
                            const audio::AudioBuffer& original, const OptimizeContext& ctx);

}  // namespace apbench::tpe
