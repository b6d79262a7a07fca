// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/perturb/apply.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "apbench/audio/phase_vocoder.hpp"
#include "apbench/errors.hpp"
#include "apbench/rng.hpp"

namespace apbench::perturb {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_range(bool ok, const std::string& what) {
  if (!ok) throw OutOfSafeRange(what);
}

audio::AudioBuffer energy_impl(const audio::AudioBuffer& in, double theta) {
  audio::AudioBuffer out = in;
  for (double& s : out.samples) s *= theta;
  return out;
}

audio::AudioBuffer trim_impl(const audio::AudioBuffer& in, double theta_seconds,
                             std::uint64_t seed, nlohmann::json* resolved) {
  if (theta_seconds < 0.0 || theta_seconds > kTrimHardCapSeconds) {
    throw OutOfSafeRange("trim theta must lie in [0, 0.1] s");
  }
  const double duration = in.duration_seconds();
  if (duration <= theta_seconds) {
    throw AudioTooShort("audio shorter than trim interval");
  }
  DeterministicRng rng(seed);
  const double t0 = rng.uniform(0.0, duration - theta_seconds);

  audio::AudioBuffer out = in;
  const auto n = static_cast<long long>(in.samples.size());
  const long long start =
      std::clamp<long long>(std::llround(t0 * in.sample_rate), 0, n);
  const long long count =
      std::clamp<long long>(std::llround(theta_seconds * in.sample_rate), 0, n - start);
  std::fill(out.samples.begin() + start, out.samples.begin() + start + count, 0.0);
  if (resolved) {
    (*resolved)["t0_seconds"] = t0;
    (*resolved)["zeroed_first_sample"] = start;
    (*resolved)["zeroed_sample_count"] = count;
  }
  return out;
}

audio::AudioBuffer fade_impl(const audio::AudioBuffer& in, double theta_max_seconds,
                             std::uint64_t seed, nlohmann::json* resolved) {
  const double duration = in.duration_seconds();
  if (theta_max_seconds < 0.0 || theta_max_seconds >= duration / 2.0) {
    throw OutOfSafeRange("fade theta must lie in [0, T/2)");
  }
  if (theta_max_seconds == 0.0) {
    if (resolved) (*resolved)["gamma_seconds"] = 0.0;
    return in;  // the draw interval (0, 0] is empty
  }
  DeterministicRng rng(seed);
  const double gamma = theta_max_seconds * (1.0 - rng.uniform01());  // (0, theta]
  if (resolved) (*resolved)["gamma_seconds"] = gamma;

  audio::AudioBuffer out = in;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = static_cast<double>(i) / in.sample_rate;
    double gain = 1.0;
    if (t < gamma) {
      gain = t / gamma;
    } else if (t > duration - gamma) {
      gain = (duration - t) / gamma;
    }
    out.samples[i] *= gain;
  }
  return out;
}

audio::AudioBuffer pitch_shift_impl(const audio::AudioBuffer& in, double semitones) {
  if (!std::isfinite(semitones)) throw OutOfSafeRange("semitones must be finite");
  const double ratio = std::exp2(semitones / 12.0);
  if (semitones == 0.0) return in;
  // Slow down by 1/ratio (length grows by ratio), then read back at step
  // ratio so the duration returns to the input length and every frequency is
  // multiplied by ratio.
  const audio::AudioBuffer stretched = audio::time_scale(in, 1.0 / ratio);
  audio::AudioBuffer out = audio::resample_linear(stretched, ratio);
  out.samples.resize(in.samples.size(), 0.0);
  return out;
}

audio::AudioBuffer time_stretch_impl(const audio::AudioBuffer& in, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw OutOfSafeRange("rate must be positive");
  return audio::time_scale(in, rate);
}

audio::AudioBuffer priming_impl(const audio::AudioBuffer& in, PrimingMode mode,
                                const SafeRanges& ranges, nlohmann::json* resolved) {
  const double freq =
      mode == PrimingMode::kInfrasound ? ranges.infrasound_hz : ranges.ultrasound_hz;
  if (mode == PrimingMode::kUltrasound && in.sample_rate / 2.0 <= freq) {
    throw NyquistViolation("ultrasound priming needs sample_rate > " +
                           std::to_string(2.0 * freq) + " Hz");
  }
  audio::AudioBuffer out = in;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    const double t = static_cast<double>(i) / in.sample_rate;
    out.samples[i] += ranges.priming_amplitude * std::sin(kTwoPi * freq * t);
  }
  if (resolved) (*resolved)["frequency_hz"] = freq;
  return out;
}

audio::AudioBuffer noise_impl(const audio::AudioBuffer& in, NoiseEvent event,
                              std::uint64_t seed, const NoiseBank& bank,
                              nlohmann::json* resolved) {
  const NoiseBank::Asset& asset = bank.pick(event, seed);
  audio::require_valid(asset.audio, "apply_noise asset");

  audio::AudioBuffer noise = asset.audio;
  if (noise.sample_rate != in.sample_rate) {
    noise = audio::resample_linear(
        noise, static_cast<double>(noise.sample_rate) / in.sample_rate);
    noise.sample_rate = in.sample_rate;
  }
  audio::AudioBuffer out = in;
  const std::size_t m = noise.samples.size();
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] += noise.samples[i % m];  // loop or truncate to length
  }
  if (resolved) (*resolved)["asset"] = asset.name;
  return out;
}

PrimingMode priming_mode_from_theta(double theta) {
  return theta < 0.5 ? PrimingMode::kInfrasound : PrimingMode::kUltrasound;
}

NoiseEvent noise_event_from_theta(double theta, const SafeRanges& ranges) {
  if (ranges.noise_events.empty()) throw UnknownEvent("noise event set is empty");
  const auto idx = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(theta), 0, static_cast<long long>(ranges.noise_events.size()) - 1));
  return ranges.noise_events[idx];
}

}  // namespace

audio::AudioBuffer apply_energy(const audio::AudioBuffer& audio, double theta,
                                const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_energy");
  check_range(ranges.energy_scale.contains(theta), "energy theta outside safe range");
  return energy_impl(audio, theta);
}

audio::AudioBuffer apply_trim(const audio::AudioBuffer& audio, double theta_seconds,
                              std::uint64_t seed, const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_trim");
  check_range(ranges.trim_seconds.contains(theta_seconds),
              "trim theta outside safe range");
  return trim_impl(audio, theta_seconds, seed, nullptr);
}

audio::AudioBuffer apply_fade(const audio::AudioBuffer& audio, double theta_max_seconds,
                              std::uint64_t seed, const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_fade");
  check_range(ranges.fade_seconds.contains(theta_max_seconds),
              "fade theta outside safe range");
  return fade_impl(audio, theta_max_seconds, seed, nullptr);
}

audio::AudioBuffer apply_pitch_shift(const audio::AudioBuffer& audio, double semitones,
                                     const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_pitch_shift");
  check_range(ranges.pitch_semitones.contains(semitones),
              "pitch shift outside safe range");
  return pitch_shift_impl(audio, semitones);
}

audio::AudioBuffer apply_time_stretch(const audio::AudioBuffer& audio, double rate,
                                      const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_time_stretch");
  check_range(ranges.temporal_rate.contains(rate), "time-stretch rate outside safe range");
  return time_stretch_impl(audio, rate);
}

audio::AudioBuffer apply_priming(const audio::AudioBuffer& audio, PrimingMode mode,
                                 const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_priming");
  return priming_impl(audio, mode, ranges, nullptr);
}

audio::AudioBuffer apply_noise(const audio::AudioBuffer& audio, NoiseEvent event,
                               std::uint64_t seed, const NoiseBank& bank,
                               const SafeRanges& ranges) {
  audio::require_valid(audio, "apply_noise");
  if (std::find(ranges.noise_events.begin(), ranges.noise_events.end(), event) ==
      ranges.noise_events.end()) {
    throw UnknownEvent("event not in configured noise set: " +
                       std::string(to_string(event)));
  }
  return noise_impl(audio, event, seed, bank, nullptr);
}

namespace detail {

audio::AudioBuffer apply_spec_unchecked(const audio::AudioBuffer& audio,
                                        const PerturbationSpec& spec,
                                        const SafeRanges& ranges, const NoiseBank* bank,
                                        nlohmann::json* resolved) {
  audio::require_valid(audio, "apply_spec");
  switch (spec.kind) {
    case PerturbationKind::kEnergyDistribution:
      return energy_impl(audio, spec.theta);
    case PerturbationKind::kTrim:
      return trim_impl(audio, spec.theta, spec.seed, resolved);
    case PerturbationKind::kFade:
      return fade_impl(audio, spec.theta, spec.seed, resolved);
    case PerturbationKind::kPitchShift:
      return pitch_shift_impl(audio, spec.theta);
    case PerturbationKind::kTemporalScale:
      return time_stretch_impl(audio, spec.theta);
    case PerturbationKind::kExtraAuditoryPriming: {
      const PrimingMode mode = priming_mode_from_theta(spec.theta);
      if (resolved) (*resolved)["mode"] = std::string(to_string(mode));
      return priming_impl(audio, mode, ranges, resolved);
    }
    case PerturbationKind::kNaturalNoiseInjection: {
      if (bank == nullptr) throw MissingAsset("no noise bank configured");
      const NoiseEvent event = noise_event_from_theta(spec.theta, ranges);
      if (resolved) (*resolved)["event"] = std::string(to_string(event));
      return noise_impl(audio, event, spec.seed, *bank, resolved);
    }
  }
  throw Error("unreachable perturbation kind");
}

}  // namespace detail

namespace {

void check_spec_in_range(const PerturbationSpec& spec, const SafeRanges& ranges) {
  switch (spec.kind) {
    case PerturbationKind::kEnergyDistribution:
      check_range(ranges.energy_scale.contains(spec.theta), "energy theta outside safe range");
      return;
    case PerturbationKind::kTrim:
      check_range(ranges.trim_seconds.contains(spec.theta), "trim theta outside safe range");
      return;
    case PerturbationKind::kFade:
      check_range(ranges.fade_seconds.contains(spec.theta), "fade theta outside safe range");
      return;
    case PerturbationKind::kPitchShift:
      check_range(ranges.pitch_semitones.contains(spec.theta),
                  "pitch shift outside safe range");
      return;
    case PerturbationKind::kTemporalScale:
      check_range(ranges.temporal_rate.contains(spec.theta),
                  "time-stretch rate outside safe range");
      return;
    case PerturbationKind::kExtraAuditoryPriming:
      check_range(spec.theta >= 0.0 && spec.theta <= 1.0, "priming selector outside [0,1]");
      return;
    case PerturbationKind::kNaturalNoiseInjection:
      check_range(spec.theta >= 0.0 &&
                      spec.theta <= static_cast<double>(ranges.noise_events.size()) - 0.5,
                  "noise selector outside event set");
      return;
  }
}

}  // namespace

nlohmann::json PerturbationRecord::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const AppliedStep& step : steps) {
    nlohmann::json s = perturb::to_json(step.spec);
    s["resolved"] = step.resolved;
    arr.push_back(std::move(s));
  }
  return nlohmann::json{{"steps", std::move(arr)}};
}

PerturbationRecord PerturbationRecord::from_json(const nlohmann::json& j) {
  PerturbationRecord record;
  for (const auto& s : j.at("steps")) {
    AppliedStep step;
    step.spec = spec_from_json(s);
    step.resolved = s.value("resolved", nlohmann::json::object());
    record.steps.push_back(std::move(step));
  }
  return record;
}

std::pair<audio::AudioBuffer, PerturbationRecord> apply_chain(
    const audio::AudioBuffer& audio, std::span<const PerturbationSpec> specs,
    const SafeRanges& ranges, const NoiseBank* bank) {
  if (specs.size() > static_cast<std::size_t>(ranges.max_overlay_rounds)) {
    throw TooManyRounds("chain of " + std::to_string(specs.size()) + " exceeds cap of " +
                        std::to_string(ranges.max_overlay_rounds));
  }

  std::vector<PerturbationSpec> ordered(specs.begin(), specs.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const PerturbationSpec& a, const PerturbationSpec& b) {
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });

  audio::AudioBuffer current = audio;
  PerturbationRecord record;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    try {
      check_spec_in_range(ordered[i], ranges);
      nlohmann::json resolved = nlohmann::json::object();
      current = detail::apply_spec_unchecked(current, ordered[i], ranges, bank, &resolved);
      record.steps.push_back(AppliedStep{ordered[i], std::move(resolved)});
    } catch (const Error& e) {
      throw ChainStepError(i, e.what());
    }
  }
  return {std::move(current), std::move(record)};
}

audio::AudioBuffer replay(const audio::AudioBuffer& audio, const PerturbationRecord& record,
                          const SafeRanges& ranges, const NoiseBank* bank) {
  std::vector<PerturbationSpec> specs;
  specs.reserve(record.steps.size());
  for (const AppliedStep& step : record.steps) specs.push_back(step.spec);
  return apply_chain(audio, specs, ranges, bank).first;
}

}  // namespace apbench::perturb
