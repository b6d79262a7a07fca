// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/gate/transcriber.hpp"

#include "apbench/audio/wav.hpp"
#include "apbench/errors.hpp"
#include "apbench/model/backoff.hpp"
#include "httplib.h"

namespace apbench::gate {

Transcript IdentityTranscriber::transcribe(const audio::AudioBuffer& audio,
                                           const std::string& sample_id) {
  audio::require_valid(audio, "transcribe");
  const auto it = texts_.find(sample_id);
  if (it == texts_.end()) {
    throw TranscriptionFailed("identity transcriber has no text for sample '" +
                              sample_id + "'");
  }
  return Transcript{it->second, sample_id};
}

Transcript HttpTranscriber::transcribe(const audio::AudioBuffer& audio,
                                       const std::string& sample_id) {
  audio::require_valid(audio, "transcribe");
  const std::vector<unsigned char> wav = audio::encode_wav(audio);
  const std::string body(reinterpret_cast<const char*>(wav.data()), wav.size());

  std::string transcript;
  bool permanent_failure = false;
  std::string last_error = "no attempt made";

  const model::BackoffPolicy policy{endpoint_.max_retries, endpoint_.backoff_initial_ms,
                                    endpoint_.backoff_max_ms, 2.0};
  const bool ok = model::retry_with_backoff(policy, [&]() {
    httplib::Client client(endpoint_.url);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(
        static_cast<long long>(endpoint_.timeout_seconds * 1000)));
    httplib::Headers headers{{"X-Sample-Id", sample_id}};
    auto res = client.Post("/transcribe", headers, body, "audio/wav");
    if (!res) {
      last_error = "transport error";
      return false;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "status " + std::to_string(res->status);
      return false;  // transient
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      permanent_failure = true;
      return true;  // stop retrying
    }
    transcript = res->body;
    return true;
  });

  if (!ok) {
    throw TranscriberUnavailable("transcriber at " + endpoint_.url +
                                 " unavailable after retries: " + last_error);
  }
  if (permanent_failure) {
    throw TranscriptionFailed("transcriber at " + endpoint_.url + " failed: " + last_error);
  }
  return Transcript{transcript, sample_id};
}

}  // namespace apbench::gate
