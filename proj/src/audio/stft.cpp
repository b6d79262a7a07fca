// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/audio/stft.hpp"

#include <cmath>
#include <string>

#include "apbench/audio/fft.hpp"
#include "apbench/errors.hpp"

namespace apbench::audio {

namespace {

void check_window_params(std::size_t window_size, std::size_t hop_size) {
  if (!is_power_of_two(window_size)) {
    throw InvalidWindow("window_size must be a power of two, got " +
                        std::to_string(window_size));
  }
  if (hop_size == 0 || hop_size > window_size) {
    throw InvalidWindow("hop_size " + std::to_string(hop_size) +
                        " must be in (0, window_size]");
  }
  if (window_size % hop_size != 0) {
    throw InvalidWindow("hop_size must divide window_size");
  }
  if (hop_size > window_size / 2) {
    throw InvalidWindow("hop_size must be at most window_size/2 for overlap-add");
  }
}

std::size_t frame_count(std::size_t samples, std::size_t window, std::size_t hop) {
  if (samples <= window) return 1;
  return (samples - window + hop - 1) / hop + 1;
}

}  // namespace

std::vector<double> make_hann_window(std::size_t n) {
  std::vector<double> w(n);
  const double pi = 3.14159265358979323846264338327950288;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * pi * (static_cast<double>(i) + 0.5) /
                                static_cast<double>(n));
  }
  return w;
}

Spectrogram stft(const AudioBuffer& audio, std::size_t window_size, std::size_t hop_size) {
  require_valid(audio, "stft");
  check_window_params(window_size, hop_size);

  const std::vector<double> window = make_hann_window(window_size);
  const std::size_t n = audio.samples.size();
  const std::size_t frames = frame_count(n, window_size, hop_size);

  Spectrogram spec;
  spec.window_size = window_size;
  spec.hop_size = hop_size;
  spec.sample_rate = audio.sample_rate;
  spec.source_samples = n;
  spec.frames.reserve(frames);

  std::vector<double> frame(window_size);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop_size;
    for (std::size_t i = 0; i < window_size; ++i) {
      const std::size_t idx = start + i;
      frame[i] = idx < n ? audio.samples[idx] * window[i] : 0.0;
    }
    spec.frames.push_back(rfft(frame, window_size));
  }
  return spec;
}

AudioBuffer istft(const Spectrogram& spec) {
  check_window_params(spec.window_size, spec.hop_size);
  if (spec.frames.empty()) throw InvalidWindow("istft: spectrogram has no frames");
  if (spec.sample_rate <= 0) throw InvalidWindow("istft: missing sample rate");
  for (const auto& fr : spec.frames) {
    if (fr.size() != spec.bins()) {
      throw InvalidWindow("istft: frame bin count does not match window metadata");
    }
  }

  const std::vector<double> window = make_hann_window(spec.window_size);
  const std::size_t span =
      (spec.frames.size() - 1) * spec.hop_size + spec.window_size;
  std::vector<double> acc(span, 0.0);
  std::vector<double> norm(span, 0.0);

  for (std::size_t f = 0; f < spec.frames.size(); ++f) {
    const std::vector<double> frame = irfft(spec.frames[f], spec.window_size);
    const std::size_t start = f * spec.hop_size;
    for (std::size_t i = 0; i < spec.window_size; ++i) {
      acc[start + i] += frame[i] * window[i];
      norm[start + i] += window[i] * window[i];
    }
  }

  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.assign(spec.source_samples, 0.0);
  const std::size_t copy = std::min(spec.source_samples, span);
  // The half-sample Hann window is strictly positive, so the window-square
  // sum never vanishes; the guard only protects against degenerate metadata.
  for (std::size_t i = 0; i < copy; ++i) {
    out.samples[i] = norm[i] > 1e-30 ? acc[i] / norm[i] : 0.0;
  }
  return out;
}

}  // namespace apbench::audio
