// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/tpe/optimize.hpp"

#include "apbench/errors.hpp"
#include "apbench/rng.hpp"

namespace apbench::tpe {

namespace {

void check_context(const OptimizeContext& ctx) {
  if (ctx.model == nullptr) throw Error("optimize: no model client");
  if (ctx.refs == nullptr) throw Error("optimize: no refusal reference set");
  if (ctx.embedder == nullptr) throw Error("optimize: no embedder");
  ctx.tpe.validate();
}

std::uint64_t trial_seed(const OptimizeContext& ctx, const std::string& sample_id,
                         int index) {
  return mix_seed(mix_seed(ctx.tpe.rng_seed, fnv1a64(sample_id)),
                  static_cast<std::uint64_t>(index));
}

}  // namespace

const Trial& OptimizationResult::best() const {
  if (best_index < 0 || best_index >= static_cast<int>(trials.size())) {
    throw Error("optimization result has no best trial");
  }
  return trials[static_cast<std::size_t>(best_index)];
}

nlohmann::json OptimizationResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Trial& t : trials) {
    arr.push_back({{"index", t.index},
                   {"point", {{"p1", t.point.p1}, {"p2", t.point.p2}}},
                   {"score", t.score},
                   {"rejected", t.rejected},
                   {"reject_reason", t.reject_reason},
                   {"response_text", t.response_text},
                   {"record", t.record.to_json()}});
  }
  return nlohmann::json{{"sample_id", sample_id},
                        {"trials", std::move(arr)},
                        {"best_index", best_index},
                        {"aborted", aborted},
                        {"abort_reason", abort_reason}};
}

Trial evaluate_trial(const SearchPoint& point, int index, const std::string& sample_id,
                     const std::string& original_text, const audio::AudioBuffer& original,
                     const OptimizeContext& ctx) {
  Trial trial;
  trial.point = point;
  trial.index = index;

  const std::vector<perturb::PerturbationSpec> specs =
      decode_point(point, ctx.ranges, trial_seed(ctx, sample_id, index));

  audio::AudioBuffer perturbed;
  try {
    auto [buf, record] = perturb::apply_chain(original, specs, ctx.ranges, ctx.noise_bank);
    perturbed = std::move(buf);
    trial.record = std::move(record);
  } catch (const Error& e) {
    trial.rejected = true;
    trial.reject_reason = std::string("infeasible chain: ") + e.what();
    trial.score = 1.0;
    return trial;
  }

  if (ctx.gate_config != nullptr) {
    const gate::GateVerdict verdict =
        gate::gate(original_text, perturbed, *ctx.gate_config, sample_id);
    if (!verdict.accepted) {
      trial.rejected = true;
      trial.reject_reason =
          "gate rejected (similarity " + std::to_string(verdict.similarity) + ")";
      trial.score = 1.0;
      return trial;
    }
  }

  const model::ModelResponse response = ctx.model->query(perturbed, sample_id);
  trial.response_text = response.text;
  trial.score = refusal_similarity(response.text, *ctx.refs, *ctx.embedder);
  return trial;
}

OptimizationResult optimize(const std::string& sample_id, const std::string& original_text,
                            const audio::AudioBuffer& original, const OptimizeContext& ctx) {
  check_context(ctx);
  audio::require_valid(original, "optimize");

  OptimizationResult result;
  result.sample_id = sample_id;
  result.trials.reserve(static_cast<std::size_t>(ctx.tpe.budget));

  for (int i = 0; i < ctx.tpe.budget; ++i) {
    const SearchPoint point = suggest(result.trials, ctx.tpe);
    try {
      result.trials.push_back(
          evaluate_trial(point, i, sample_id, original_text, original, ctx));
    } catch (const Error& e) {
      // Binding failure (model, scorer, embedder): keep the partial history.
      result.aborted = true;
      result.abort_reason = e.what();
      break;
    }
  }

  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    if (result.best_index < 0 ||
        result.trials[i].score < result.trials[static_cast<std::size_t>(result.best_index)].score) {
      result.best_index = static_cast<int>(i);
    }
  }
  return result;
}

}  // namespace apbench::tpe
