// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <chrono>
#include <functional>
#include <thread>

namespace apbench::model {

struct BackoffPolicy {
  int max_retries = 3;
  double initial_delay_ms = 100.0;
  double max_delay_ms = 5000.0;
  double multiplier = 2.0;
};

// Runs attempt() up to max_retries + 1 times. attempt returns true on
// success; transient failures sleep for an exponentially growing delay.
// Returns false when every attempt failed.
inline bool retry_with_backoff(const BackoffPolicy& policy,
                               const std::function<bool()>& attempt) {
  double delay = policy.initial_delay_ms;
  for (int tries = 0;; ++tries) {
    if (attempt()) return true;
    if (tries >= policy.max_retries) return false;
    std::this_thread::sleep_for(
        std::chrono::milliseconds(static_cast<long long>(delay)));
    delay = std::min(delay * policy.multiplier, policy.max_delay_ms);
  }
}

}  // namespace apbench::model
