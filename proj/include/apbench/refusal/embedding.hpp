// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "apbench/gate/transcriber.hpp"  // HttpEndpoint

namespace apbench::refusal {

struct EmbeddingVector {
  std::vector<double> components;

  std::size_t dim() const { return components.size(); }
  double l2_norm() const;
  bool is_zero() const;
  // Returns a unit-norm copy; zero vectors stay zero (degenerate).
  EmbeddingVector normalized() const;
};

// cos(a, b); 0.0 when either vector is zero (cosine undefined, by convention).
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

struct Embedder {
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed(const std::string& text) = 0;
  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;
};

// Hermetic fallback: hashed bag-of-words term frequencies, L2-normalized.
// Nonnegative components, so cosines live in [0, 1].
class HashedBowEmbedder : public Embedder {
 public:
  static constexpr std::size_t kDim = 1024;

  EmbeddingVector embed(const std::string& text) override;
  std::size_t dim() const override { return kDim; }
  std::string name() const override { return "offline-hashed-bow-1024"; }

  // Exposed so tests can verify hash-collision-freedom of chosen token sets.
  static std::size_t bucket(const std::string& token);
};

// POST /embed {"text": ...} -> {"embedding": [...]}.
class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(gate::HttpEndpoint endpoint, std::size_t expected_dim)
      : endpoint_(std::move(endpoint)), dim_(expected_dim) {}
  EmbeddingVector embed(const std::string& text) override;
  std::size_t dim() const override { return dim_; }
  std::string name() const override { return "http:" + endpoint_.url; }

 private:
  gate::HttpEndpoint endpoint_;
  std::size_t dim_;
};

}  // namespace apbench::refusal
