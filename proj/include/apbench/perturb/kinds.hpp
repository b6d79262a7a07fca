// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"

namespace apbench::perturb {

// Fixed order; the enum index doubles as the bit position in the optimizer's
// type bitmask, so reordering is a wire-format break.
enum class PerturbationKind : int {
  kEnergyDistribution = 0,
  kTrim = 1,
  kFade = 2,
  kPitchShift = 3,
  kTemporalScale = 4,
  kExtraAuditoryPriming = 5,
  kNaturalNoiseInjection = 6,
};

constexpr int kPerturbationKindCount = 7;

enum class PrimingMode : int { kInfrasound = 0, kUltrasound = 1 };

enum class NoiseEvent : int { kRain = 0, kCry = 1, kHorn = 2, kMusic = 3 };

std::string_view to_string(PerturbationKind kind);
std::string_view to_string(PrimingMode mode);
std::string_view to_string(NoiseEvent event);

PerturbationKind perturbation_kind_from_string(std::string_view name);
PrimingMode priming_mode_from_string(std::string_view name);  // throws OutOfSafeRange
NoiseEvent noise_event_from_string(std::string_view name);    // throws UnknownEvent

// One parameterized transform instance. theta's meaning depends on kind:
// gain scale | trim seconds | max fade seconds | semitones | speed rate |
// priming mode selector (0/1) | noise event selector (0..3). seed drives all
// random draws, so replay is bit-exact.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::kEnergyDistribution;
  double theta = 0.0;
  std::uint64_t seed = 0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

// Per-method semantically safe parameter bounds. The temporal-scale interval
// and the overlay cap come from the semantic-threshold calibration; the trim
// cap is hard and survives recalibration.
struct SafeRanges {
  Interval energy_scale{0.1, 4.0};
  Interval trim_seconds{0.0, 0.1};
  Interval fade_seconds{0.0, 0.5};
  Interval pitch_semitones{-4.0, 4.0};
  Interval temporal_rate{0.6, 1.2};
  double priming_amplitude = 0.1;
  double infrasound_hz = 10.0;
  double ultrasound_hz = 21000.0;
  std::vector<NoiseEvent> noise_events{NoiseEvent::kRain, NoiseEvent::kCry,
                                       NoiseEvent::kHorn, NoiseEvent::kMusic};
  int max_overlay_rounds = 10;

  nlohmann::json to_json() const;
  static SafeRanges from_json(const nlohmann::json& j);
};

constexpr double kTrimHardCapSeconds = 0.1;

nlohmann::json to_json(const PerturbationSpec& spec);
PerturbationSpec spec_from_json(const nlohmann::json& j);

}  // namespace apbench::perturb
