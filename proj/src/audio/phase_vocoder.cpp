// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/audio/phase_vocoder.hpp"

#include <cmath>
#include <complex>

#include "apbench/errors.hpp"

namespace apbench::audio {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// Wraps an angle to (-pi, pi].
double princarg(double phase) {
  double wrapped = std::fmod(phase + kPi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  return wrapped - kPi;
}

}  // namespace

Spectrogram phase_vocoder(const Spectrogram& spec, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidRate("phase_vocoder: rate must be positive and finite");
  }
  if (spec.frames.empty()) throw InvalidWindow("phase_vocoder: empty spectrogram");

  const std::size_t in_frames = spec.frames.size();
  const std::size_t bins = spec.bins();
  const std::size_t out_frames = static_cast<std::size_t>(
      std::ceil(static_cast<double>(in_frames) / rate));

  Spectrogram out;
  out.window_size = spec.window_size;
  out.hop_size = spec.hop_size;
  out.sample_rate = spec.sample_rate;
  out.source_samples = static_cast<std::size_t>(
      std::llround(static_cast<double>(spec.source_samples) / rate));
  out.frames.assign(out_frames, std::vector<std::complex<double>>(bins));

  // Expected per-hop phase advance of bin b.
  std::vector<double> expected(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    expected[b] = kTwoPi * static_cast<double>(spec.hop_size) * static_cast<double>(b) /
                  static_cast<double>(spec.window_size);
  }

  std::vector<double> phase_acc(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    phase_acc[b] = std::arg(spec.frames[0][b]);
    out.frames[0][b] = spec.frames[0][b];
  }

  for (std::size_t k = 1; k < out_frames; ++k) {
    const double pos = static_cast<double>(k) * rate;
    std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 >= in_frames - 1) i0 = in_frames - 1;
    const std::size_t i1 = std::min(i0 + 1, in_frames - 1);
    const double frac = pos - static_cast<double>(i0);

    // The phase advance into this frame is estimated at the analysis
    // position we are advancing from; at unit rate this telescopes to the
    // exact analysis phases.
    const double prev_pos = static_cast<double>(k - 1) * rate;
    std::size_t j0 = static_cast<std::size_t>(prev_pos);
    if (in_frames >= 2 && j0 >= in_frames - 1) j0 = in_frames - 2;
    const std::size_t j1 = std::min(j0 + 1, in_frames - 1);

    for (std::size_t b = 0; b < bins; ++b) {
      const double mag = (1.0 - frac) * std::abs(spec.frames[i0][b]) +
                         frac * std::abs(spec.frames[i1][b]);
      double advance = expected[b];
      if (j1 != j0) {
        advance += princarg(std::arg(spec.frames[j1][b]) -
                            std::arg(spec.frames[j0][b]) - expected[b]);
      }
      phase_acc[b] += advance;
      out.frames[k][b] = std::polar(mag, phase_acc[b]);
    }
  }
  return out;
}

AudioBuffer time_scale(const AudioBuffer& audio, double rate, std::size_t window_size,
                       std::size_t hop_size) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidRate("time_scale: rate must be positive and finite");
  }
  const Spectrogram analysis = stft(audio, window_size, hop_size);
  const Spectrogram scaled = phase_vocoder(analysis, rate);
  return istft(scaled);
}

AudioBuffer resample_linear(const AudioBuffer& audio, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw InvalidRate("resample_linear: step must be positive and finite");
  }
  require_valid(audio, "resample_linear");
  const std::size_t n = audio.samples.size();
  const std::size_t out_n = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(static_cast<double>(n) / step)));

  AudioBuffer out;
  out.sample_rate = audio.sample_rate;
  out.samples.resize(out_n);
  for (std::size_t i = 0; i < out_n; ++i) {
    const double pos = static_cast<double>(i) * step;
    std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 >= n - 1) {
      out.samples[i] = audio.samples[n - 1];
      continue;
    }
    const double frac = pos - static_cast<double>(i0);
    out.samples[i] =
        (1.0 - frac) * audio.samples[i0] + frac * audio.samples[i0 + 1];
  }
  return out;
}

}  // namespace apbench::audio
