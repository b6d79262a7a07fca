// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>

namespace apbench::tpe {

// Radical-inverse (van der Corput) value of index in the given base; the
// 2-D Halton sequence uses bases 2 and 3.
double halton(std::uint64_t index, std::uint64_t base);

// Deterministic start offset derived from a seed, so different runs walk
// different but replayable stretches of the sequence.
std::uint64_t halton_offset(std::uint64_t seed);

}  // namespace apbench::tpe
