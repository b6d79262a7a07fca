// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/tpe/decode.hpp"

#include <algorithm>
#include <cmath>

#include "apbench/rng.hpp"

namespace apbench::tpe {

using perturb::PerturbationKind;
using perturb::PerturbationSpec;
using perturb::SafeRanges;

std::vector<PerturbationSpec> decode_point(const SearchPoint& point, const SafeRanges& ranges,
                                           std::uint64_t seed) {
  const int mask = std::clamp(static_cast<int>(std::floor(point.p1 * 127.0)) + 1, 1, 127);
  const double p2 = std::clamp(point.p2, 0.0, 1.0);

  std::vector<PerturbationSpec> specs;
  for (int k = 0; k < perturb::kPerturbationKindCount; ++k) {
    if ((mask & (1 << k)) == 0) continue;
    const auto kind = static_cast<PerturbationKind>(k);
    PerturbationSpec spec;
    spec.kind = kind;
    spec.seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    switch (kind) {
      case PerturbationKind::kEnergyDistribution:
        spec.theta = ranges.energy_scale.lo + p2 * ranges.energy_scale.width();
        break;
      case PerturbationKind::kTrim:
        spec.theta = ranges.trim_seconds.lo + p2 * ranges.trim_seconds.width();
        break;
      case PerturbationKind::kFade:
        spec.theta = ranges.fade_seconds.lo + p2 * ranges.fade_seconds.width();
        break;
      case PerturbationKind::kPitchShift:
        spec.theta = ranges.pitch_semitones.lo + p2 * ranges.pitch_semitones.width();
        break;
      case PerturbationKind::kTemporalScale:
        spec.theta = ranges.temporal_rate.lo + p2 * ranges.temporal_rate.width();
        break;
      case PerturbationKind::kExtraAuditoryPriming:
        // two discrete modes: [0, 0.5) infrasound, [0.5, 1] ultrasound
        spec.theta = p2 < 0.5 ? 0.0 : 1.0;
        break;
      case PerturbationKind::kNaturalNoiseInjection: {
        const auto n = static_cast<double>(ranges.noise_events.size());
        spec.theta = std::min(n - 1.0, std::floor(p2 * n));
        break;
      }
    }
    specs.push_back(spec);
  }
  return specs;
}

}  // namespace apbench::tpe
