// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace apbench::audio {

// In-place radix-2 FFT; a.size() must be a power of two. The inverse
// transform divides by N.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

// Real input of length <= n is zero-padded to n; returns the one-sided
// spectrum of n/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);

// Inverse of rfft for a Hermitian-symmetric spectrum; returns n real samples.
std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t n);

bool is_power_of_two(std::size_t n);

}  // namespace apbench::audio
