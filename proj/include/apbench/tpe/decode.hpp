// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <vector>

#include "apbench/perturb/kinds.hpp"
#include "apbench/tpe/sampler.hpp"

namespace apbench::tpe {

// p1 -> non-empty subset of the 7 kinds via bitmask floor(p1*127)+1 clamped to
// [1, 127] over the enum bit order; p2 -> per-kind theta by affine map onto
// the kind's safe range (discrete kinds quantize p2 over their options).
// Per-spec seeds are derived from the given seed and the kind index.
std::vector<perturb::PerturbationSpec> decode_point(const SearchPoint& point,
                                                    const perturb::SafeRanges& ranges,
                                                    std::uint64_t seed);

}  // namespace apbench::tpe
