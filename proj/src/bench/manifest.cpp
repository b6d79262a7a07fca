// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/bench/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "apbench/errors.hpp"

namespace apbench::bench {

const std::vector<std::string>& categories() {
  static const std::vector<std::string> kCategories = {
      "Disinformation",      "Economic Harm",
      "Decision Making",     "Fraud Advice",
      "Government Deception", "Harassment/Discrimination",
      "Malware/Hacking",     "Physical Harm",
      "Privacy",             "Sexual Content",
  };
  return kCategories;
}

bool is_known_category(const std::string& name) {
  const auto& cats = categories();
  return std::find(cats.begin(), cats.end(), name) != cats.end();
}

const std::vector<std::string>& accents() {
  static const std::vector<std::string> kAccents = {"UK", "AU", "US", "India"};
  return kAccents;
}

namespace {

VoiceInfo voice_from_json(const nlohmann::json& j) {
  VoiceInfo v;
  v.accent = j.at("accent").get<std::string>();
  v.timbre = j.at("timbre").get<std::string>();
  const auto& known = accents();
  if (std::find(known.begin(), known.end(), v.accent) == known.end()) {
    throw SchemaViolation("unknown accent: " + v.accent);
  }
  return v;
}

nlohmann::json voice_to_json(const VoiceInfo& v) {
  return nlohmann::json{{"accent", v.accent}, {"timbre", v.timbre}};
}

}  // namespace

nlohmann::json ManifestEntry::to_json() const {
  nlohmann::json j{{"id", id},
                   {"category", category},
                   {"text", text},
                   {"audio_path", audio_path},
                   {"voice", voice_to_json(voice)}};
  if (perturbation_record) j["perturbation_record"] = *perturbation_record;
  return j;
}

ManifestEntry ManifestEntry::from_json(const nlohmann::json& j) {
  ManifestEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.category = j.at("category").get<std::string>();
    e.text = j.at("text").get<std::string>();
    e.audio_path = j.at("audio_path").get<std::string>();
    e.voice = voice_from_json(j.at("voice"));
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaViolation(std::string("bad manifest entry: ") + ex.what());
  }
  if (e.id.empty()) throw SchemaViolation("manifest entry with empty id");
  if (!is_known_category(e.category)) {
    throw UnknownCategory("unknown category: " + e.category);
  }
  if (j.contains("perturbation_record")) {
    e.perturbation_record = j.at("perturbation_record");
  }
  return e;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                         bool check_audio) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open manifest: " + path.string());

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) +
                            ": not valid JSON: " + ex.what());
    }
    ManifestEntry entry;
    try {
      entry = ManifestEntry::from_json(j);
    } catch (const UnknownCategory&) {
      throw;
    } catch (const Error& ex) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
    if (!seen_ids.insert(entry.id).second) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) + ": duplicate id '" +
                            entry.id + "'");
    }
    if (check_audio) {
      const auto audio = path.parent_path() / entry.audio_path;
      if (!std::filesystem::exists(audio)) {
        throw SchemaViolation("manifest line " + std::to_string(line_no) +
                              ": audio file missing: " + audio.string());
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open manifest for writing: " + path.string());
  for (const ManifestEntry& e : entries) {
    out << e.to_json().dump() << "\n";
  }
  if (!out.good()) throw IoFailure("manifest write failed: " + path.string());
}

std::vector<TextEntry> load_text_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open manifest: " + path.string());
  std::vector<TextEntry> entries;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      TextEntry e;
      e.id = j.at("id").get<std::string>();
      e.category = j.at("category").get<std::string>();
      e.text = j.at("text").get<std::string>();
      e.voice = voice_from_json(j.at("voice"));
      if (!is_known_category(e.category)) {
        throw UnknownCategory("unknown category: " + e.category);
      }
      if (!seen_ids.insert(e.id).second) {
        throw SchemaViolation("duplicate id '" + e.id + "'");
      }
      entries.push_back(std::move(e));
    } catch (const UnknownCategory&) {
      throw;
    } catch (const SchemaViolation& ex) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const std::exception& ex) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return entries;
}

}  // namespace apbench::bench
