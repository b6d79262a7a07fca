// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/refusal/embedding.hpp"

#include <cmath>

#include "apbench/errors.hpp"
#include "apbench/model/backoff.hpp"
#include "apbench/rng.hpp"
#include "apbench/text.hpp"
#include "httplib.h"
#include "nlohmann/json.hpp"

namespace apbench::refusal {

double EmbeddingVector::l2_norm() const {
  double acc = 0.0;
  for (double c : components) acc += c * c;
  return std::sqrt(acc);
}

bool EmbeddingVector::is_zero() const {
  for (double c : components) {
    if (c != 0.0) return false;
  }
  return true;
}

EmbeddingVector EmbeddingVector::normalized() const {
  const double norm = l2_norm();
  if (norm == 0.0) return *this;
  EmbeddingVector out = *this;
  for (double& c : out.components) c /= norm;
  return out;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw Error("cosine: dimension mismatch");
  const double na = a.l2_norm();
  const double nb = b.l2_norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a.components[i] * b.components[i];
  return dot / (na * nb);
}

std::size_t HashedBowEmbedder::bucket(const std::string& token) {
  return static_cast<std::size_t>(fnv1a64(token) % kDim);
}

EmbeddingVector HashedBowEmbedder::embed(const std::string& text) {
  EmbeddingVector v;
  v.components.assign(kDim, 0.0);
  for (const std::string& token : text::tokenize(text)) {
    v.components[bucket(token)] += 1.0;
  }
  return v.normalized();
}

EmbeddingVector HttpEmbedder::embed(const std::string& text) {
  const nlohmann::json req{{"text", text}};
  const std::string body = req.dump();

  EmbeddingVector out;
  std::string last_error = "no attempt made";
  const model::BackoffPolicy policy{endpoint_.max_retries, endpoint_.backoff_initial_ms,
                                    endpoint_.backoff_max_ms, 2.0};
  const bool ok = model::retry_with_backoff(policy, [&]() {
    httplib::Client client(endpoint_.url);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    auto res = client.Post("/embed", body, "application/json");
    if (!res || res->status >= 500 || res->status == 429) {
      last_error = res ? "status " + std::to_string(res->status) : "transport error";
      return false;
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      return false;
    }
    try {
      out.components = nlohmann::json::parse(res->body)
                           .at("embedding")
                           .get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("bad response: ") + e.what();
      return false;
    }
    return true;
  });
  if (!ok) {
    throw EmbedderUnavailable("embedder at " + endpoint_.url + " unavailable: " + last_error);
  }
  if (out.dim() != dim_) {
    throw EmbedderUnavailable("embedder returned dim " + std::to_string(out.dim()) +
                              ", expected " + std::to_string(dim_));
  }
  return out;
}

}  // namespace apbench::refusal
