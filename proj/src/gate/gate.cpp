// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/gate/gate.hpp"

#include <algorithm>
#include <cmath>

#include "apbench/errors.hpp"
#include "apbench/rng.hpp"
#include "apbench/text.hpp"

namespace apbench::gate {

using perturb::PerturbationKind;
using perturb::PerturbationSpec;

void GateConfig::validate() const {
  // tau above 1 is allowed and rejects everything (similarity is capped at 1)
  if (tau < 0.0) throw Error("gate tau must be non-negative");
  if (max_overlay_rounds < 1) throw Error("max_overlay_rounds must be >= 1");
  if (!scorer) throw Error("gate config has no similarity scorer");
  if (!transcriber) throw Error("gate config has no transcriber");
}

GateVerdict gate(const std::string& original_text, const audio::AudioBuffer& perturbed,
                 const GateConfig& config, const std::string& sample_id) {
  config.validate();
  const Transcript transcript = config.transcriber->transcribe(perturbed, sample_id);
  if (text::canonicalize(transcript.text).empty()) {
    return GateVerdict{false, 0.0, transcript.text};
  }
  const double similarity = config.scorer->score(original_text, transcript.text);
  return GateVerdict{similarity >= config.tau, similarity, transcript.text};
}

nlohmann::json CalibrationCurve::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const CalibrationPoint& p : points) {
    pts.push_back({{"theta", p.theta}, {"similarity", p.similarity}, {"accepted", p.accepted}});
  }
  nlohmann::json j{{"points", std::move(pts)}, {"region_empty", region_empty}};
  if (!region_empty) {
    j["region"] = {region_lo, region_hi};
  }
  return j;
}

std::optional<double> identity_theta(PerturbationKind kind) {
  switch (kind) {
    case PerturbationKind::kEnergyDistribution: return 1.0;
    case PerturbationKind::kTrim: return 0.0;
    case PerturbationKind::kFade: return 0.0;
    case PerturbationKind::kPitchShift: return 0.0;
    case PerturbationKind::kTemporalScale: return 1.0;
    case PerturbationKind::kExtraAuditoryPriming:
    case PerturbationKind::kNaturalNoiseInjection: return std::nullopt;
  }
  return std::nullopt;
}

namespace {

// Expands the accepted run around the anchor index and fills in the region.
void fill_region(CalibrationCurve& curve, std::size_t anchor) {
  if (!curve.points[anchor].accepted) {
    curve.region_empty = true;
    return;
  }
  std::size_t lo = anchor;
  while (lo > 0 && curve.points[lo - 1].accepted) --lo;
  std::size_t hi = anchor;
  while (hi + 1 < curve.points.size() && curve.points[hi + 1].accepted) ++hi;
  curve.region_empty = false;
  curve.region_lo = curve.points[lo].theta;
  curve.region_hi = curve.points[hi].theta;
}

std::size_t nearest_index(const std::vector<CalibrationPoint>& points, double target) {
  std::size_t best = 0;
  double best_dist = std::abs(points[0].theta - target);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d = std::abs(points[i].theta - target);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

CalibrationCurve calibrate_threshold(const audio::AudioBuffer& original,
                                     const std::string& text, PerturbationKind kind,
                                     std::span<const double> sweep, const GateConfig& config,
                                     const perturb::SafeRanges& ranges,
                                     const perturb::NoiseBank* bank, std::uint64_t seed,
                                     const std::string& sample_id) {
  config.validate();
  if (sweep.empty()) throw EmptySweep("calibration sweep is empty");
  if (!std::is_sorted(sweep.begin(), sweep.end())) {
    throw Error("calibration sweep must be sorted ascending");
  }

  CalibrationCurve curve;
  curve.points.reserve(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const PerturbationSpec spec{kind, sweep[i], mix_seed(seed, i)};
    const audio::AudioBuffer perturbed =
        perturb::detail::apply_spec_unchecked(original, spec, ranges, bank, nullptr);
    const GateVerdict verdict = gate(text, perturbed, config, sample_id);
    curve.points.push_back({sweep[i], verdict.similarity, verdict.accepted});
  }

  const std::optional<double> identity = identity_theta(kind);
  if (identity.has_value()) {
    fill_region(curve, nearest_index(curve.points, *identity));
  } else {
    // Discrete selector kinds have no identity; take the longest accepted run.
    std::size_t best_len = 0, best_start = 0, run_start = 0, run_len = 0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (curve.points[i].accepted) {
        if (run_len == 0) run_start = i;
        if (++run_len > best_len) {
          best_len = run_len;
          best_start = run_start;
        }
      } else {
        run_len = 0;
      }
    }
    if (best_len > 0) {
      curve.region_empty = false;
      curve.region_lo = curve.points[best_start].theta;
      curve.region_hi = curve.points[best_start + best_len - 1].theta;
    }
  }
  return curve;
}

CalibrationCurve calibrate_overlay_rounds(const audio::AudioBuffer& original,
                                          const std::string& text, int max_rounds,
                                          const GateConfig& config,
                                          const perturb::SafeRanges& ranges,
                                          const perturb::NoiseBank* bank, std::uint64_t seed,
                                          const std::string& sample_id) {
  config.validate();
  if (max_rounds < 1) throw EmptySweep("overlay sweep needs at least one round");

  // Length-preserving kinds only; a cumulative sweep of time scaling would
  // compound duration geometrically.
  std::vector<PerturbationKind> pool = {PerturbationKind::kEnergyDistribution,
                                        PerturbationKind::kTrim, PerturbationKind::kFade};
  pool.push_back(PerturbationKind::kExtraAuditoryPriming);
  const bool noise_usable =
      bank != nullptr && std::any_of(ranges.noise_events.begin(), ranges.noise_events.end(),
                                     [&](auto e) { return bank->has_assets(e); });
  if (noise_usable) pool.push_back(PerturbationKind::kNaturalNoiseInjection);

  CalibrationCurve curve;
  audio::AudioBuffer current = original;
  for (int round = 1; round <= max_rounds; ++round) {
    DeterministicRng rng(mix_seed(seed, static_cast<std::uint64_t>(round)));
    const PerturbationKind kind = pool[rng.uniform_index(pool.size())];
    PerturbationSpec spec{kind, 0.0, rng.next_u64()};
    switch (kind) {
      case PerturbationKind::kEnergyDistribution:
        spec.theta = rng.uniform(ranges.energy_scale.lo, ranges.energy_scale.hi);
        break;
      case PerturbationKind::kTrim:
        spec.theta = rng.uniform(ranges.trim_seconds.lo, ranges.trim_seconds.hi);
        break;
      case PerturbationKind::kFade:
        spec.theta = rng.uniform(ranges.fade_seconds.lo, ranges.fade_seconds.hi);
        break;
      case PerturbationKind::kExtraAuditoryPriming:
        // infrasound unless the rate supports ultrasound
        spec.theta = (original.sample_rate / 2.0 > ranges.ultrasound_hz)
                         ? rng.uniform(0.0, 1.0)
                         : 0.0;
        break;
      case PerturbationKind::kNaturalNoiseInjection: {
        std::vector<std::size_t> usable;
        for (std::size_t i = 0; i < ranges.noise_events.size(); ++i) {
          if (bank->has_assets(ranges.noise_events[i])) usable.push_back(i);
        }
        spec.theta = static_cast<double>(usable[rng.uniform_index(usable.size())]);
        break;
      }
      default:
        break;
    }
    current = perturb::detail::apply_spec_unchecked(current, spec, ranges, bank, nullptr);
    const GateVerdict verdict = gate(text, current, config, sample_id);
    curve.points.push_back({static_cast<double>(round), verdict.similarity, verdict.accepted});
  }

  // Rounds grow away from the zero-round identity, so the region is anchored
  // at round 1.
  fill_region(curve, 0);
  return curve;
}

}  // namespace apbench::gate
