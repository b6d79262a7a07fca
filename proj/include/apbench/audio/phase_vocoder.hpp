// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "apbench/audio/stft.hpp"

namespace apbench::audio {

// Re-times a spectrogram by the given speed factor while keeping per-bin
// phase increments coherent. rate > 1 speeds playback up (fewer frames),
// rate < 1 slows it down; output has ceil(frames/rate) frames.
Spectrogram phase_vocoder(const Spectrogram& spec, double rate);

// stft -> phase_vocoder -> istft. Output length is exactly
// round(input_length / rate); pitch is unchanged.
AudioBuffer time_scale(const AudioBuffer& audio, double rate,
                       std::size_t window_size = kDefaultWindowSize,
                       std::size_t hop_size = kDefaultHopSize);

// Reads the input at fractional positions i*step with linear interpolation;
// output length is round(size/step). The sample rate tag is left unchanged,
// so frequencies scale by step.
AudioBuffer resample_linear(const AudioBuffer& audio, double step);

}  // namespace apbench::audio
