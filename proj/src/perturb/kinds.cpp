// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/perturb/kinds.hpp"

#include "apbench/errors.hpp"

namespace apbench::perturb {

namespace {
constexpr std::array<std::string_view, kPerturbationKindCount> kKindNames = {
    "EnergyDistribution", "Trim",      "Fade",
    "PitchShift",         "TemporalScale", "ExtraAuditoryPriming",
    "NaturalNoiseInjection"};
constexpr std::array<std::string_view, 2> kPrimingNames = {"infrasound", "ultrasound"};
constexpr std::array<std::string_view, 4> kNoiseNames = {"Rain", "Cry", "Horn", "Music"};
}  // namespace

std::string_view to_string(PerturbationKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(PrimingMode mode) {
  return kPrimingNames[static_cast<std::size_t>(mode)];
}

std::string_view to_string(NoiseEvent event) {
  return kNoiseNames[static_cast<std::size_t>(event)];
}

PerturbationKind perturbation_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<PerturbationKind>(i);
  }
  throw Error("unknown perturbation kind: " + std::string(name));
}

PrimingMode priming_mode_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kPrimingNames.size(); ++i) {
    if (kPrimingNames[i] == name) return static_cast<PrimingMode>(i);
  }
  throw OutOfSafeRange("unknown priming mode: " + std::string(name));
}

NoiseEvent noise_event_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNoiseNames.size(); ++i) {
    if (kNoiseNames[i] == name) return static_cast<NoiseEvent>(i);
  }
  throw UnknownEvent("unknown noise event: " + std::string(name));
}

nlohmann::json SafeRanges::to_json() const {
  nlohmann::json events = nlohmann::json::array();
  for (NoiseEvent e : noise_events) events.push_back(std::string(to_string(e)));
  return nlohmann::json{
      {"energy_scale", {energy_scale.lo, energy_scale.hi}},
      {"trim_seconds", {trim_seconds.lo, trim_seconds.hi}},
      {"fade_seconds", {fade_seconds.lo, fade_seconds.hi}},
      {"pitch_semitones", {pitch_semitones.lo, pitch_semitones.hi}},
      {"temporal_rate", {temporal_rate.lo, temporal_rate.hi}},
      {"priming_amplitude", priming_amplitude},
      {"infrasound_hz", infrasound_hz},
      {"ultrasound_hz", ultrasound_hz},
      {"noise_events", events},
      {"max_overlay_rounds", max_overlay_rounds},
  };
}

SafeRanges SafeRanges::from_json(const nlohmann::json& j) {
  SafeRanges r;
  auto interval = [&](const char* key, Interval fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    return Interval{v.at(0).get<double>(), v.at(1).get<double>()};
  };
  r.energy_scale = interval("energy_scale", r.energy_scale);
  r.trim_seconds = interval("trim_seconds", r.trim_seconds);
  r.fade_seconds = interval("fade_seconds", r.fade_seconds);
  r.pitch_semitones = interval("pitch_semitones", r.pitch_semitones);
  r.temporal_rate = interval("temporal_rate", r.temporal_rate);
  r.priming_amplitude = j.value("priming_amplitude", r.priming_amplitude);
  r.infrasound_hz = j.value("infrasound_hz", r.infrasound_hz);
  r.ultrasound_hz = j.value("ultrasound_hz", r.ultrasound_hz);
  if (j.contains("noise_events")) {
    r.noise_events.clear();
    for (const auto& e : j.at("noise_events")) {
      r.noise_events.push_back(noise_event_from_string(e.get<std::string>()));
    }
  }
  r.max_overlay_rounds = j.value("max_overlay_rounds", r.max_overlay_rounds);
  return r;
}

nlohmann::json to_json(const PerturbationSpec& spec) {
  return nlohmann::json{{"kind", std::string(to_string(spec.kind))},
                        {"theta", spec.theta},
                        {"seed", spec.seed}};
}

PerturbationSpec spec_from_json(const nlohmann::json& j) {
  PerturbationSpec spec;
  spec.kind = perturbation_kind_from_string(j.at("kind").get<std::string>());
  spec.theta = j.at("theta").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  return spec;
}

}  // namespace apbench::perturb
