// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "apbench/audio/buffer.hpp"

namespace apbench::audio {

// Reads a RIFF/WAVE file. Accepts PCM 16-bit integer and IEEE float 32-bit
// data (directly or via WAVE_FORMAT_EXTENSIBLE); multichannel input is mixed
// down by arithmetic mean. Integer samples are normalized by 1/32768.
AudioBuffer load_wav(const std::filesystem::path& path);

// Writes canonical form: 16-bit PCM, little-endian, mono. Samples are clamped
// to [-1, 1] before quantization.
void save_wav(const AudioBuffer& audio, const std::filesystem::path& path);

// In-memory equivalents, used by network clients and tests.
AudioBuffer decode_wav(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_wav(const AudioBuffer& audio);

}  // namespace apbench::audio
