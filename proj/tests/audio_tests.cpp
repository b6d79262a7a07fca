// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <complex>
#include <cstring>
#include <vector>

#include "apbench/audio/fft.hpp"
#include "apbench/audio/phase_vocoder.hpp"
#include "apbench/audio/stft.hpp"
#include "apbench/audio/wav.hpp"
#include "apbench/errors.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace apbench;
using audio::AudioBuffer;
using testutil::make_sine;
using testutil::make_white_noise;
using testutil::snr_db;
using testutil::TempDir;

namespace {

// Minimal hand-rolled WAV builder so the parser is tested against bytes we
// control, not against our own encoder.
std::vector<unsigned char> raw_wav(std::uint16_t format, std::uint16_t channels,
                                   std::uint32_t rate, std::uint16_t bits,
                                   const std::vector<unsigned char>& data) {
  std::vector<unsigned char> b;
  auto u16 = [&](std::uint16_t v) {
    b.push_back(v & 0xFF);
    b.push_back((v >> 8) & 0xFF);
  };
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xFF);
  };
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  u32(36 + static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), {'W', 'A', 'V', 'E'});
  b.insert(b.end(), {'f', 'm', 't', ' '});
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(channels * bits / 8);
  u16(bits);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  u32(static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

std::vector<unsigned char> pcm16_bytes(const std::vector<std::int16_t>& samples) {
  std::vector<unsigned char> out;
  for (std::int16_t s : samples) {
    out.push_back(static_cast<unsigned char>(s & 0xFF));
    out.push_back(static_cast<unsigned char>((s >> 8) & 0xFF));
  }
  return out;
}

// Naive O(N^2) DFT used as the independent oracle for the FFT.
std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -two_pi * static_cast<double>(k * t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("wav roundtrip stays within one quantization step") {
  TempDir dir("wav");
  AudioBuffer buf = make_white_noise(4321, 16000, 7);
  const auto path = dir.path() / "x.wav";
  audio::save_wav(buf, path);
  const AudioBuffer back = audio::load_wav(path);
  REQUIRE(back.sample_rate == 16000);
  REQUIRE(back.samples.size() == buf.samples.size());
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    CHECK(std::abs(back.samples[i] - buf.samples[i]) <= 1.0 / 32768.0 + 1e-12);
  }
}

TEST_CASE("stereo input is downmixed by arithmetic mean") {
  // Frames: (L, R) = (1000, 3000), (-2000, -4000).
  const auto bytes = raw_wav(1, 2, 8000, 16, pcm16_bytes({1000, 3000, -2000, -4000}));
  const AudioBuffer buf = audio::decode_wav(bytes);
  REQUIRE(buf.samples.size() == 2);
  CHECK(buf.samples[0] == doctest::Approx(2000.0 / 32768.0).epsilon(1e-12));
  CHECK(buf.samples[1] == doctest::Approx(-3000.0 / 32768.0).epsilon(1e-12));
}

TEST_CASE("mu-law wav is rejected as UnsupportedFormat") {
  const auto bytes = raw_wav(7, 1, 8000, 8, {0x80, 0x80});
  CHECK_THROWS_AS(audio::decode_wav(bytes), UnsupportedFormat);
}

TEST_CASE("float32 wav is accepted") {
  std::vector<unsigned char> data(8);
  const float a = 0.25f, b = -0.5f;
  std::memcpy(data.data(), &a, 4);
  std::memcpy(data.data() + 4, &b, 4);
  const AudioBuffer buf = audio::decode_wav(raw_wav(3, 1, 22050, 32, data));
  REQUIRE(buf.samples.size() == 2);
  CHECK(buf.samples[0] == doctest::Approx(0.25));
  CHECK(buf.samples[1] == doctest::Approx(-0.5));
}

TEST_CASE("corrupt header is rejected") {
  std::vector<unsigned char> junk = {'R', 'I', 'F', 'X', 0, 0, 0, 0, 'W', 'A', 'V', 'E'};
  CHECK_THROWS_AS(audio::decode_wav(junk), CorruptHeader);
  // truncated chunk body
  auto bytes = raw_wav(1, 1, 8000, 16, pcm16_bytes({1, 2, 3}));
  bytes.resize(bytes.size() - 2);
  CHECK_THROWS_AS(audio::decode_wav(bytes), CorruptHeader);
}

TEST_CASE("out-of-range samples clamp at write time") {
  AudioBuffer buf;
  buf.sample_rate = 8000;
  buf.samples = {1.7, -1.7, 0.0};
  const auto bytes = audio::encode_wav(buf);
  // data chunk starts at byte 44
  const std::int16_t first = static_cast<std::int16_t>(bytes[44] | (bytes[45] << 8));
  const std::int16_t second = static_cast<std::int16_t>(bytes[46] | (bytes[47] << 8));
  CHECK(first == 32767);
  CHECK(second == -32768);
}

TEST_CASE("saving an empty buffer fails") {
  AudioBuffer buf;
  buf.sample_rate = 8000;
  TempDir dir("wav_empty");
  CHECK_THROWS_AS(audio::save_wav(buf, dir.path() / "e.wav"), EmptyAudio);
}

TEST_CASE("fft matches a naive dft") {
  auto x = make_white_noise(16, 8000, 3).samples;
  const auto oracle = naive_dft(x);
  const auto got = audio::rfft(x, 16);
  REQUIRE(got.size() == 9);
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(std::abs(got[k] - oracle[k]) < 1e-9);
  }
  const auto back = audio::irfft(got, 16);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
  }
}

TEST_CASE("stft frame count follows the index arithmetic") {
  // ceil((N - W)/H) + 1 frames for N > W, else 1.
  auto expected_frames = [](std::size_t n, std::size_t w, std::size_t h) {
    if (n <= w) return std::size_t{1};
    return (n - w + h - 1) / h + 1;
  };
  const AudioBuffer buf = make_white_noise(4096, 16000, 11);
  const auto spec = audio::stft(buf, 2048, 512);
  CHECK(spec.frames.size() == 5);
  CHECK(spec.frames.size() == expected_frames(4096, 2048, 512));
  CHECK(spec.bins() == 1025);
  for (const auto& frame : spec.frames) CHECK(frame.size() == 1025);

  const AudioBuffer uneven = make_white_noise(5000, 16000, 12);
  CHECK(audio::stft(uneven, 2048, 512).frames.size() == expected_frames(5000, 2048, 512));
  const AudioBuffer shorter = make_white_noise(1000, 16000, 13);
  CHECK(audio::stft(shorter, 2048, 512).frames.size() == 1);
}

TEST_CASE("all-zero signal gives an all-zero spectrogram") {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.samples.assign(4096, 0.0);
  const auto spec = audio::stft(buf);
  for (const auto& frame : spec.frames) {
    for (const auto& c : frame) CHECK(std::abs(c) == 0.0);
  }
}

TEST_CASE("invalid window parameters are rejected") {
  const AudioBuffer buf = make_white_noise(4096, 16000, 5);
  CHECK_THROWS_AS(audio::stft(buf, 2048, 3000), InvalidWindow);
  CHECK_THROWS_AS(audio::stft(buf, 2000, 500), InvalidWindow);   // not a power of two
  CHECK_THROWS_AS(audio::stft(buf, 2048, 2048), InvalidWindow);  // no overlap
  CHECK_THROWS_AS(audio::stft(buf, 2048, 300), InvalidWindow);   // does not divide
}

TEST_CASE("istft rejects mismatched window metadata") {
  const AudioBuffer buf = make_white_noise(4096, 16000, 6);
  auto spec = audio::stft(buf);
  spec.window_size = 1024;  // frames still carry 2048-window bins
  CHECK_THROWS_AS(audio::istft(spec), InvalidWindow);
}

TEST_CASE("stft/istft roundtrip exceeds 60 dB over random signals") {
  for (int i = 0; i < 25; ++i) {
    const std::size_t n = 2048 + static_cast<std::size_t>(i) * 517;
    const AudioBuffer buf = make_white_noise(n, 16000, 100 + i);
    const AudioBuffer back = audio::istft(audio::stft(buf));
    REQUIRE(back.samples.size() == buf.samples.size());
    CHECK(snr_db(buf.samples, back.samples) >= 60.0);
  }
}

TEST_CASE("zero spectrogram reconstructs to silence") {
  AudioBuffer buf;
  buf.sample_rate = 16000;
  buf.samples.assign(4096, 0.0);
  auto spec = audio::stft(buf);
  const AudioBuffer out = audio::istft(spec);
  for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("phase vocoder at unit rate preserves frames and magnitudes") {
  const AudioBuffer buf = make_sine(440.0, 0.5, 16000);
  const auto spec = audio::stft(buf);
  const auto out = audio::phase_vocoder(spec, 1.0);
  REQUIRE(out.frames.size() == spec.frames.size());
  for (std::size_t f = 0; f < spec.frames.size(); ++f) {
    for (std::size_t b = 0; b < spec.bins(); ++b) {
      CHECK(std::abs(std::abs(out.frames[f][b]) - std::abs(spec.frames[f][b])) < 1e-6);
    }
  }
}

TEST_CASE("phase vocoder frame count scales with rate") {
  const AudioBuffer buf = make_white_noise(16384, 16000, 21);
  const auto spec = audio::stft(buf);
  const auto half = audio::phase_vocoder(spec, 0.5);
  const auto expected = static_cast<long long>(spec.frames.size()) * 2;
  CHECK(std::abs(static_cast<long long>(half.frames.size()) - expected) <= 1);
}

TEST_CASE("phase vocoder rejects non-positive rates") {
  const AudioBuffer buf = make_white_noise(4096, 16000, 22);
  const auto spec = audio::stft(buf);
  CHECK_THROWS_AS(audio::phase_vocoder(spec, 0.0), InvalidRate);
  CHECK_THROWS_AS(audio::phase_vocoder(spec, -1.0), InvalidRate);
}

TEST_CASE("unit-rate phase vocoder roundtrip stays above 30 dB") {
  const AudioBuffer buf = make_white_noise(16384, 16000, 23);
  const AudioBuffer out = audio::time_scale(buf, 1.0);
  REQUIRE(out.samples.size() == buf.samples.size());
  CHECK(snr_db(buf.samples, out.samples) >= 30.0);
}

TEST_CASE("operations are pure: repeated runs are bit-identical") {
  const AudioBuffer buf = make_white_noise(8192, 16000, 31);
  const auto a = audio::istft(audio::phase_vocoder(audio::stft(buf), 0.8));
  const auto b = audio::istft(audio::phase_vocoder(audio::stft(buf), 0.8));
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);
}
