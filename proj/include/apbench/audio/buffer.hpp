// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <vector>

namespace apbench::audio {

// Mono time-domain waveform. Samples are nominally in [-1, 1]; intermediate
// processing may exceed that range, clamping happens only when writing WAV.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Throws EmptyAudio / Error when the buffer cannot be used as an operation
// input (empty, non-positive rate, non-finite samples).
void require_valid(const AudioBuffer& audio, const char* op_name);

}  // namespace apbench::audio
