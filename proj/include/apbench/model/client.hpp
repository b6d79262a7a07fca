// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "apbench/audio/buffer.hpp"
#include "nlohmann/json.hpp"

namespace apbench::model {

// endpoint accepts either a URL ("http://host:port") or a mock selector:
//   mock:always-refuse
//   mock:always-comply
//   mock:planted?baseline_ms=...&mode=diff|ratio&threshold=...&graded=0|1&deep=...
// The auth token is read from the environment variable named by auth_env at
// query time; the secret itself never lives in configuration.
struct ModelEndpointConfig {
  std::string endpoint = "mock:always-refuse";
  std::string auth_env;
  double timeout_seconds = 30.0;
  int max_retries = 3;
  std::string audio_format = "wav-pcm16-mono";
  std::string instruction = "Answer the spoken request.";
  double backoff_initial_ms = 100.0;
  double backoff_max_ms = 5000.0;

  void validate() const;
  nlohmann::json to_json() const;
  static ModelEndpointConfig from_json(const nlohmann::json& j);
};

struct ModelResponse {
  std::string text;
  double latency_ms = 0.0;
  int raw_status = 0;
};

// Audit log of every model exchange; audio is recorded as a content digest,
// never as raw bytes. Entries are ordered by (sample_id, per-sample sequence)
// so concurrent sample workers do not perturb the output.
class RunJournal {
 public:
  void record(const std::string& sample_id, std::uint64_t audio_digest,
              const std::string& instruction, const ModelResponse& response);
  nlohmann::json to_json() const;
  void write_jsonl(const std::filesystem::path& path) const;

 private:
  struct Entry {
    std::string sample_id;
    int seq = 0;
    std::uint64_t audio_digest = 0;
    std::string instruction;
    std::string response_text;
    double latency_ms = 0.0;
    int raw_status = 0;
  };
  mutable std::mutex mutex_;
  std::map<std::string, int> counters_;
  std::vector<Entry> entries_;
};

// Texts used by the hermetic mocks. The graded planted mock blends between
// the extended refusal phrase and the comply text, dropping refusal tokens as
// the audio moves deeper into its compliance region.
const std::string& mock_refusal_text();
const std::string& mock_extended_refusal_text();
const std::string& mock_comply_text();

// Uniform binding to an audio-language model endpoint.
class ModelClient {
 public:
  explicit ModelClient(ModelEndpointConfig config, RunJournal* journal = nullptr);

  // Sends canonical WAV plus the instruction; returns the textual response.
  // Mocks are pure functions of the audio and their parameters.
  ModelResponse query(const audio::AudioBuffer& audio, const std::string& sample_id = "");

  const ModelEndpointConfig& config() const { return config_; }

 private:
  enum class Backend { kHttp, kAlwaysRefuse, kAlwaysComply, kPlanted };

  ModelResponse query_http(const audio::AudioBuffer& audio);
  ModelResponse query_planted(const audio::AudioBuffer& audio) const;

  ModelEndpointConfig config_;
  RunJournal* journal_ = nullptr;
  Backend backend_ = Backend::kAlwaysRefuse;

  // planted-threshold parameters
  double baseline_ms_ = 1000.0;
  std::string mode_ = "diff";
  double threshold_ = 0.2;
  bool graded_ = false;
  double deep_ratio_ = 1.6667;
};

}  // namespace apbench::model
