// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <map>
#include <memory>
#include <string>

#include "apbench/audio/buffer.hpp"

namespace apbench::gate {

struct Transcript {
  std::string text;  // empty means recognition failed; the gate rejects it
  std::string source_audio_id;
};

struct Transcriber {
  virtual ~Transcriber() = default;
  virtual Transcript transcribe(const audio::AudioBuffer& audio,
                                const std::string& sample_id) = 0;
  virtual std::string name() const = 0;
};

// Test double: returns the registered ground-truth text for the sample id.
class IdentityTranscriber : public Transcriber {
 public:
  IdentityTranscriber() = default;
  explicit IdentityTranscriber(std::map<std::string, std::string> texts)
      : texts_(std::move(texts)) {}

  void register_text(const std::string& sample_id, const std::string& text) {
    texts_[sample_id] = text;
  }

  Transcript transcribe(const audio::AudioBuffer& audio,
                        const std::string& sample_id) override;
  std::string name() const override { return "identity"; }

 private:
  std::map<std::string, std::string> texts_;
};

struct HttpEndpoint {
  std::string url;
  double timeout_seconds = 30.0;
  int max_retries = 3;
  double backoff_initial_ms = 100.0;
  double backoff_max_ms = 5000.0;
};

// POSTs canonical WAV bytes to <url>; the sample id travels in the
// X-Sample-Id header and the response body is the UTF-8 transcript.
class HttpTranscriber : public Transcriber {
 public:
  explicit HttpTranscriber(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
  Transcript transcribe(const audio::AudioBuffer& audio,
                        const std::string& sample_id) override;
  std::string name() const override { return "http:" + endpoint_.url; }

 private:
  HttpEndpoint endpoint_;
};

}  // namespace apbench::gate
