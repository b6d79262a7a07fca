// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/tpe/halton.hpp"

#include "apbench/rng.hpp"

namespace apbench::tpe {

double halton(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double f = 1.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    result += f * static_cast<double>(index % base);
    index /= base;
  }
  return result;
}

std::uint64_t halton_offset(std::uint64_t seed) {
  // 1..10007; skipping index 0 avoids the degenerate origin point.
  return splitmix64(seed) % 10007 + 1;
}

}  // namespace apbench::tpe
