// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "apbench/refusal/embedding.hpp"

namespace apbench::refusal {

// Refusal phrases with cached unit-norm embeddings. Built once, read-only
// afterwards.
class RefusalReferenceSet {
 public:
  static RefusalReferenceSet from_phrases(std::vector<std::string> phrases,
                                          Embedder& embedder);
  // One phrase per line; blank lines and lines starting with '#' skipped.
  // Records the FNV-1a digest of the file bytes for reproducibility.
  static RefusalReferenceSet load(const std::filesystem::path& path, Embedder& embedder);

  const std::vector<std::string>& phrases() const { return phrases_; }
  const std::vector<EmbeddingVector>& embeddings() const { return embeddings_; }
  std::uint64_t source_digest() const { return source_digest_; }
  std::string embedder_name() const { return embedder_name_; }

 private:
  std::vector<std::string> phrases_;
  std::vector<EmbeddingVector> embeddings_;
  std::uint64_t source_digest_ = 0;
  std::string embedder_name_;
};

// max over reference phrases of cos(emb(response), emb(phrase)). Empty or
// token-free responses embed to the zero vector and score 0 (degenerate).
double refusal_similarity(const std::string& response, const RefusalReferenceSet& refs,
                          Embedder& embedder);

}  // namespace apbench::refusal
