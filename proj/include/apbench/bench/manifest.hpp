// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

namespace apbench::bench {

// Closed taxonomy; category strings must match exactly.
const std::vector<std::string>& categories();
bool is_known_category(const std::string& name);

const std::vector<std::string>& accents();  // UK, AU, US, India

struct VoiceInfo {
  std::string accent;
  std::string timbre;
};

struct ManifestEntry {
  std::string id;
  std::string category;
  std::string text;        // original jailbreak prompt
  std::string audio_path;  // relative to the manifest file
  VoiceInfo voice;
  std::optional<nlohmann::json> perturbation_record;

  nlohmann::json to_json() const;
  static ManifestEntry from_json(const nlohmann::json& j);  // throws SchemaViolation
};

// JSONL, one entry per line. Validates the schema, the closed category set,
// id uniqueness, and (when check_audio is set) that every referenced audio
// file exists relative to the manifest location.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                         bool check_audio = true);

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path);

// Entries for the ingest command: same schema minus audio_path.
struct TextEntry {
  std::string id;
  std::string category;
  std::string text;
  VoiceInfo voice;
};

std::vector<TextEntry> load_text_manifest(const std::filesystem::path& path);

}  // namespace apbench::bench
