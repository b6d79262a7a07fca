// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "apbench/audio/buffer.hpp"
#include "apbench/perturb/kinds.hpp"
#include "apbench/perturb/noise_bank.hpp"
#include "nlohmann/json.hpp"

namespace apbench::perturb {

// All operations are pure: same inputs (including seeds) give bit-identical
// outputs. Parameters outside SafeRanges are rejected, never clamped.

// out[t] = theta * in[t].
audio::AudioBuffer apply_energy(const audio::AudioBuffer& audio, double theta,
                                const SafeRanges& ranges = {});

// Zeroes [t0, t0 + theta_seconds] with t0 drawn uniformly from [0, T - theta]
// by seed; length is preserved.
audio::AudioBuffer apply_trim(const audio::AudioBuffer& audio, double theta_seconds,
                              std::uint64_t seed, const SafeRanges& ranges = {});

// Linear gain ramps over [0, gamma) and (T - gamma, T], gamma drawn uniformly
// from (0, theta_max_seconds] by seed. theta = 0 is the identity.
audio::AudioBuffer apply_fade(const audio::AudioBuffer& audio, double theta_max_seconds,
                              std::uint64_t seed, const SafeRanges& ranges = {});

// Phase-vocoder time scale by r = 2^(semitones/12) followed by resampling by
// 1/r; duration is preserved exactly, frequencies scale by r.
audio::AudioBuffer apply_pitch_shift(const audio::AudioBuffer& audio, double semitones,
                                     const SafeRanges& ranges = {});

// Phase-vocoder speed change; output duration is round(input/rate), pitch is
// preserved.
audio::AudioBuffer apply_time_stretch(const audio::AudioBuffer& audio, double rate,
                                      const SafeRanges& ranges = {});

// Adds A0 * sin(2*pi*f*t) with f = 10 Hz (infrasound) or 21 kHz (ultrasound).
// Ultrasound requires sample_rate/2 > 21 kHz.
audio::AudioBuffer apply_priming(const audio::AudioBuffer& audio, PrimingMode mode,
                                 const SafeRanges& ranges = {});

// Overlays a seed-selected bank instance, resampled to the input rate and
// looped/truncated to the input length.
audio::AudioBuffer apply_noise(const audio::AudioBuffer& audio, NoiseEvent event,
                               std::uint64_t seed, const NoiseBank& bank,
                               const SafeRanges& ranges = {});

struct AppliedStep {
  PerturbationSpec spec;
  nlohmann::json resolved;  // resolved random draws (t0, gamma, asset name, ...)
};

struct PerturbationRecord {
  std::vector<AppliedStep> steps;

  nlohmann::json to_json() const;
  static PerturbationRecord from_json(const nlohmann::json& j);
};

// Applies specs in canonical order: waveform kinds, then frequency kinds,
// then hybrid kinds; ties broken by enum index, then list order. At most
// ranges.max_overlay_rounds specs. Per-op failures are rethrown as
// ChainStepError carrying the (sorted) step index.
std::pair<audio::AudioBuffer, PerturbationRecord> apply_chain(
    const audio::AudioBuffer& audio, std::span<const PerturbationSpec> specs,
    const SafeRanges& ranges = {}, const NoiseBank* bank = nullptr);

// Re-applies a record; bit-identical to the original application because the
// seeds pin every draw.
audio::AudioBuffer replay(const audio::AudioBuffer& audio, const PerturbationRecord& record,
                          const SafeRanges& ranges = {}, const NoiseBank* bank = nullptr);

namespace detail {
// Range checks skipped; used by calibration sweeps that probe beyond the
// current SafeRanges. Physical preconditions (trim hard cap, Nyquist, fade
// under half duration) still hold.
audio::AudioBuffer apply_spec_unchecked(const audio::AudioBuffer& audio,
                                        const PerturbationSpec& spec, const SafeRanges& ranges,
                                        const NoiseBank* bank, nlohmann::json* resolved);
}  // namespace detail

}  // namespace apbench::perturb
