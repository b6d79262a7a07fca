// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <memory>
#include <string>

#include "apbench/gate/transcriber.hpp"  // HttpEndpoint

namespace apbench::gate {

// Text similarity in [0, 1]; reference must be non-empty.
struct SimilarityScorer {
  virtual ~SimilarityScorer() = default;
  virtual double score(const std::string& reference, const std::string& hypothesis) = 0;
  virtual std::string name() const = 0;
};

// Offline substitute for the model-based production scorer:
// 1 - normalized character-level edit distance after lowercasing and
// punctuation stripping. Symmetric, bounded, deterministic.
class EditDistanceScorer : public SimilarityScorer {
 public:
  double score(const std::string& reference, const std::string& hypothesis) override;
  std::string name() const override { return "offline-edit-distance"; }
};

// Delegates to a scoring service: POST /score {"reference","hypothesis"} ->
// {"score": x}; the result is clamped to [0, 1].
class HttpScorer : public SimilarityScorer {
 public:
  explicit HttpScorer(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  double score(const std::string& reference, const std::string& hypothesis) override;
  std::string name() const override { return "http:" + endpoint_.url; }

 private:
  HttpEndpoint endpoint_;
};

}  // namespace apbench::gate
