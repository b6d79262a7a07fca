// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apbench/audio/buffer.hpp"
#include "apbench/rng.hpp"

namespace apbench::testutil {

inline audio::AudioBuffer make_sine(double freq_hz, double seconds, int sample_rate,
                                    double amplitude = 0.5) {
  audio::AudioBuffer buf;
  buf.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  buf.samples.resize(n);
  const double two_pi = 6.283185307179586476925286766559;
  for (std::size_t i = 0; i < n; ++i) {
    buf.samples[i] = amplitude * std::sin(two_pi * freq_hz * i / sample_rate);
  }
  return buf;
}

inline audio::AudioBuffer make_white_noise(std::size_t n, int sample_rate,
                                           std::uint64_t seed, double amplitude = 0.5) {
  audio::AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(n);
  DeterministicRng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    buf.samples[i] = amplitude * (2.0 * rng.uniform01() - 1.0);
  }
  return buf;
}

inline double snr_db(const std::vector<double>& reference, const std::vector<double>& test) {
  double signal = 0.0;
  double noise = 0.0;
  const std::size_t n = std::min(reference.size(), test.size());
  for (std::size_t i = 0; i < n; ++i) {
    signal += reference[i] * reference[i];
    const double d = reference[i] - test[i];
    noise += d * d;
  }
  for (std::size_t i = n; i < reference.size(); ++i) {
    signal += reference[i] * reference[i];
    noise += reference[i] * reference[i];
  }
  if (noise == 0.0) return 300.0;
  return 10.0 * std::log10(signal / noise);
}

// Goertzel magnitude at one frequency; used as an FFT-independent spectral
// oracle.
inline double goertzel_power(const std::vector<double>& x, int sample_rate, double freq_hz) {
  const double two_pi = 6.283185307179586476925286766559;
  const double w = two_pi * freq_hz / sample_rate;
  const double coeff = 2.0 * std::cos(w);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (double v : x) {
    s0 = v + coeff * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  return s1 * s1 + s2 * s2 - coeff * s1 * s2;
}

// Scans [f_lo, f_hi] in step_hz increments and returns the frequency with the
// largest Goertzel magnitude.
inline double peak_frequency(const std::vector<double>& x, int sample_rate, double f_lo,
                             double f_hi, double step_hz = 1.0) {
  double best_f = f_lo;
  double best_p = -1.0;
  for (double f = f_lo; f <= f_hi; f += step_hz) {
    const double p = goertzel_power(x, sample_rate, f);
    if (p > best_p) {
      best_p = p;
      best_f = f;
    }
  }
  return best_f;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("apbench_test_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

}  // namespace apbench::testutil
