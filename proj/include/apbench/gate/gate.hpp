// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apbench/audio/buffer.hpp"
#include "apbench/gate/scorer.hpp"
#include "apbench/gate/transcriber.hpp"
#include "apbench/perturb/apply.hpp"
#include "nlohmann/json.hpp"

namespace apbench::gate {

// Semantic safety threshold derived from the transcription-similarity study;
// perturbations scoring below it are considered meaning-destroying.
constexpr double kDefaultTau = 0.638;
constexpr int kDefaultMaxOverlayRounds = 10;

struct GateConfig {
  double tau = kDefaultTau;  // acceptance is similarity >= tau
  int max_overlay_rounds = kDefaultMaxOverlayRounds;
  std::shared_ptr<SimilarityScorer> scorer;
  std::shared_ptr<Transcriber> transcriber;

  void validate() const;  // 0 <= tau <= 1, rounds >= 1, bindings present
};

struct GateVerdict {
  bool accepted = false;
  double similarity = 0.0;
  std::string transcript;
};

// Transcribes the perturbed audio and scores it against the original prompt.
// An empty transcript fails the gate with similarity 0 (heavy perturbation
// legitimately destroys speech; that is a rejection, not a fault).
GateVerdict gate(const std::string& original_text, const audio::AudioBuffer& perturbed,
                 const GateConfig& config, const std::string& sample_id = "");

struct CalibrationPoint {
  double theta = 0.0;
  double similarity = 0.0;
  bool accepted = false;
};

// (theta, similarity) sweep plus the contiguous-from-identity region whose
// similarity stays >= tau. That region is the recalibrated safe range.
struct CalibrationCurve {
  std::vector<CalibrationPoint> points;
  bool region_empty = true;
  double region_lo = 0.0;
  double region_hi = 0.0;

  nlohmann::json to_json() const;
};

// The parameter value at which each method is a no-op; nullopt for the
// discrete selector kinds.
std::optional<double> identity_theta(perturb::PerturbationKind kind);

// Sweeps theta for one method, gating each perturbed variant against the
// original text. sweep must be sorted ascending and non-empty.
CalibrationCurve calibrate_threshold(const audio::AudioBuffer& original,
                                     const std::string& text, perturb::PerturbationKind kind,
                                     std::span<const double> sweep, const GateConfig& config,
                                     const perturb::SafeRanges& ranges = {},
                                     const perturb::NoiseBank* bank = nullptr,
                                     std::uint64_t seed = 0,
                                     const std::string& sample_id = "");

// Cumulative-round sweep: round k applies k seed-drawn in-range perturbations
// on top of each other. Deliberately not capped by max_overlay_rounds so the
// sweep can probe past the production limit (e.g. rounds 1..13).
CalibrationCurve calibrate_overlay_rounds(const audio::AudioBuffer& original,
                                          const std::string& text, int max_rounds,
                                          const GateConfig& config,
                                          const perturb::SafeRanges& ranges = {},
                                          const perturb::NoiseBank* bank = nullptr,
                                          std::uint64_t seed = 0,
                                          const std::string& sample_id = "");

}  // namespace apbench::gate
