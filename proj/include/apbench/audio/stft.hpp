// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "apbench/audio/buffer.hpp"

namespace apbench::audio {

constexpr std::size_t kDefaultWindowSize = 2048;
constexpr std::size_t kDefaultHopSize = 512;

// One-sided complex spectrogram. frames[f][b] with bins = window_size/2 + 1;
// frame f covers samples [f*hop, f*hop + window) of the source signal.
struct Spectrogram {
  std::vector<std::vector<std::complex<double>>> frames;
  std::size_t window_size = 0;
  std::size_t hop_size = 0;
  int sample_rate = 0;
  // Length of the analyzed signal; istft trims its output back to this.
  std::size_t source_samples = 0;

  std::size_t bins() const { return window_size / 2 + 1; }
};

// Hann window evaluated at half-sample offsets: w[i] = 0.5 - 0.5*cos(2*pi*(i+0.5)/n).
// Strictly positive at the endpoints, which keeps edge samples recoverable,
// and COLA-exact for any hop dividing n with n/hop >= 2.
std::vector<double> make_hann_window(std::size_t n);

// window_size must be a power of two; hop_size must divide window_size and be
// at most window_size/2 (COLA for the Hann window). The tail is zero-padded so
// the last frame covers the final samples.
Spectrogram stft(const AudioBuffer& audio, std::size_t window_size = kDefaultWindowSize,
                 std::size_t hop_size = kDefaultHopSize);

// Weighted overlap-add with pointwise window-square normalization; output is
// trimmed/padded to spec.source_samples.
AudioBuffer istft(const Spectrogram& spec);

}  // namespace apbench::audio
