// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

namespace apbench {
inline constexpr const char* kToolkitVersion = "0.1.0";
}
