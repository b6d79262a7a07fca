// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "apbench/model/client.hpp"
#include "apbench/perturb/kinds.hpp"
#include "apbench/tpe/sampler.hpp"
#include "nlohmann/json.hpp"

namespace apbench::bench {

// Declarative run configuration. Binding selectors:
//   transcriber: "identity" | "http://host:port"
//   scorer:      "offline"  | "http://host:port"
//   embedder:    "offline"  | "http://host:port"
//   judge:       "none" | "stub" | "http://host:port"
// Secrets never appear here; the model config names an environment variable.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path output_dir;

  tpe::TpeConfig tpe;
  double gate_tau = 0.638;
  int gate_max_overlay_rounds = 10;
  bool gate_during_optimize = true;
  perturb::SafeRanges ranges;
  model::ModelEndpointConfig model;

  std::string transcriber = "identity";
  std::string scorer = "offline";
  std::string embedder = "offline";
  std::string judge = "none";

  std::filesystem::path keywords_file;
  std::filesystem::path refusal_phrases_file;
  std::filesystem::path refusal_corpus_file;  // optional
  std::filesystem::path noise_bank_dir;       // optional

  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j,
                             const std::filesystem::path& base_dir);
  static RunConfig load(const std::filesystem::path& path);

  // Digest of the effective (post-override) configuration; embedded in every
  // output artifact.
  std::uint64_t digest() const;
};

std::uint64_t file_digest(const std::filesystem::path& path);

}  // namespace apbench::bench
