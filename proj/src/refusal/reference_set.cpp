// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/refusal/reference_set.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "apbench/errors.hpp"
#include "apbench/rng.hpp"

namespace apbench::refusal {

RefusalReferenceSet RefusalReferenceSet::from_phrases(std::vector<std::string> phrases,
                                                      Embedder& embedder) {
  if (phrases.empty()) throw EmptyReferenceSet("refusal reference set is empty");
  RefusalReferenceSet set;
  set.phrases_ = std::move(phrases);
  set.embedder_name_ = embedder.name();
  set.embeddings_.reserve(set.phrases_.size());
  for (const std::string& phrase : set.phrases_) {
    EmbeddingVector v = embedder.embed(phrase).normalized();
    if (v.is_zero()) {
      throw EmptyReferenceSet("reference phrase embeds to the zero vector: '" + phrase +
                              "'");
    }
    if (v.dim() != embedder.dim()) {
      throw EmbedderUnavailable("embedding dimension mismatch for reference phrase");
    }
    set.embeddings_.push_back(std::move(v));
  }
  return set;
}

RefusalReferenceSet RefusalReferenceSet::load(const std::filesystem::path& path,
                                              Embedder& embedder) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open reference set: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();

  std::vector<std::string> phrases;
  std::istringstream lines(bytes);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    phrases.push_back(line);
  }
  RefusalReferenceSet set = from_phrases(std::move(phrases), embedder);
  set.source_digest_ = fnv1a64(bytes);
  return set;
}

double refusal_similarity(const std::string& response, const RefusalReferenceSet& refs,
                          Embedder& embedder) {
  if (refs.phrases().empty()) throw EmptyReferenceSet("refusal reference set is empty");
  const EmbeddingVector resp = embedder.embed(response).normalized();
  if (resp.is_zero()) return 0.0;
  double best = -1.0;
  for (const EmbeddingVector& ref : refs.embeddings()) {
    best = std::max(best, cosine(resp, ref));
  }
  return best;
}

}  // namespace apbench::refusal
