// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/audio/buffer.hpp"

#include <cmath>
#include <string>

#include "apbench/errors.hpp"

namespace apbench::audio {

void require_valid(const AudioBuffer& audio, const char* op_name) {
  const std::string where(op_name);
  if (audio.samples.empty()) throw EmptyAudio(where + ": empty audio buffer");
  if (audio.sample_rate <= 0) throw Error(where + ": sample_rate must be positive");
  for (double s : audio.samples) {
    if (!std::isfinite(s)) throw Error(where + ": non-finite sample");
  }
}

}  // namespace apbench::audio
