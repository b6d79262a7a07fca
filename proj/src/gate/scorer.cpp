// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/gate/scorer.hpp"

#include <algorithm>

#include "apbench/errors.hpp"
#include "apbench/model/backoff.hpp"
#include "apbench/text.hpp"
#include "httplib.h"
#include "nlohmann/json.hpp"

namespace apbench::gate {

double EditDistanceScorer::score(const std::string& reference,
                                 const std::string& hypothesis) {
  if (text::canonicalize(reference).empty()) {
    throw EmptyReference("similarity reference is empty");
  }
  return text::normalized_similarity(reference, hypothesis);
}

double HttpScorer::score(const std::string& reference, const std::string& hypothesis) {
  if (text::canonicalize(reference).empty()) {
    throw EmptyReference("similarity reference is empty");
  }
  const nlohmann::json req{{"reference", reference}, {"hypothesis", hypothesis}};
  const std::string body = req.dump();

  double value = 0.0;
  std::string last_error = "no attempt made";
  const model::BackoffPolicy policy{endpoint_.max_retries, endpoint_.backoff_initial_ms,
                                    endpoint_.backoff_max_ms, 2.0};
  const bool ok = model::retry_with_backoff(policy, [&]() {
    httplib::Client client(endpoint_.url);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    auto res = client.Post("/score", body, "application/json");
    if (!res || res->status >= 500 || res->status == 429) {
      last_error = res ? "status " + std::to_string(res->status) : "transport error";
      return false;
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      return false;
    }
    try {
      value = nlohmann::json::parse(res->body).at("score").get<double>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("bad response: ") + e.what();
      return false;
    }
    return true;
  });
  if (!ok) {
    throw ScorerUnavailable("scorer at " + endpoint_.url + " unavailable: " + last_error);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace apbench::gate
