// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/bench/run_config.hpp"

#include <fstream>
#include <sstream>

#include "apbench/errors.hpp"
#include "apbench/rng.hpp"

namespace apbench::bench {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

void RunConfig::validate() const {
  tpe.validate();
  model.validate();
  if (gate_tau < 0.0) throw Error("gate_tau must be non-negative");
  if (gate_max_overlay_rounds < 1) throw Error("gate_max_overlay_rounds must be >= 1");
  if (workers < 1) throw Error("workers must be >= 1");
}

nlohmann::json RunConfig::to_json() const {
  return nlohmann::json{
      {"manifest", manifest.string()},
      {"output_dir", output_dir.string()},
      {"tpe", tpe.to_json()},
      {"gate_tau", gate_tau},
      {"gate_max_overlay_rounds", gate_max_overlay_rounds},
      {"gate_during_optimize", gate_during_optimize},
      {"safe_ranges", ranges.to_json()},
      {"model", model.to_json()},
      {"transcriber", transcriber},
      {"scorer", scorer},
      {"embedder", embedder},
      {"judge", judge},
      {"keywords_file", keywords_file.string()},
      {"refusal_phrases_file", refusal_phrases_file.string()},
      {"refusal_corpus_file", refusal_corpus_file.string()},
      {"noise_bank_dir", noise_bank_dir.string()},
      {"seed", seed},
      {"workers", workers},
  };
}

RunConfig RunConfig::from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.manifest = resolve(base_dir, j.value("manifest", ""));
  cfg.output_dir = resolve(base_dir, j.value("output_dir", ""));
  if (j.contains("tpe")) cfg.tpe = tpe::TpeConfig::from_json(j.at("tpe"));
  cfg.gate_tau = j.value("gate_tau", cfg.gate_tau);
  cfg.gate_max_overlay_rounds =
      j.value("gate_max_overlay_rounds", cfg.gate_max_overlay_rounds);
  cfg.gate_during_optimize = j.value("gate_during_optimize", cfg.gate_during_optimize);
  if (j.contains("safe_ranges")) {
    cfg.ranges = perturb::SafeRanges::from_json(j.at("safe_ranges"));
  }
  if (j.contains("model")) {
    cfg.model = model::ModelEndpointConfig::from_json(j.at("model"));
  }
  cfg.transcriber = j.value("transcriber", cfg.transcriber);
  cfg.scorer = j.value("scorer", cfg.scorer);
  cfg.embedder = j.value("embedder", cfg.embedder);
  cfg.judge = j.value("judge", cfg.judge);
  cfg.keywords_file = resolve(base_dir, j.value("keywords_file", ""));
  cfg.refusal_phrases_file = resolve(base_dir, j.value("refusal_phrases_file", ""));
  cfg.refusal_corpus_file = resolve(base_dir, j.value("refusal_corpus_file", ""));
  cfg.noise_bank_dir = resolve(base_dir, j.value("noise_bank_dir", ""));
  cfg.seed = j.value("seed", cfg.seed);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("config parse error in " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

std::uint64_t RunConfig::digest() const {
  // Input/output locations must not affect the digest, or identical runs
  // rooted in different directories would disagree; the manifest's content
  // digest is recorded separately in every artifact.
  nlohmann::json j = to_json();
  j.erase("output_dir");
  j.erase("manifest");
  return fnv1a64(j.dump());
}

std::uint64_t file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open for digest: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

}  // namespace apbench::bench
