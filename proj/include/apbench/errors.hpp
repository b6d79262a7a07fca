// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace apbench {

// Base class for every error the toolkit throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// audio
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptHeader : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct EmptyAudio : Error { using Error::Error; };
struct InvalidWindow : Error { using Error::Error; };
struct InvalidRate : Error { using Error::Error; };

// perturbations
struct OutOfSafeRange : Error { using Error::Error; };
struct AudioTooShort : Error { using Error::Error; };
struct TooManyRounds : Error { using Error::Error; };
struct UnknownEvent : Error { using Error::Error; };
struct MissingAsset : Error { using Error::Error; };
struct NyquistViolation : Error { using Error::Error; };

// A chain step failed; carries the index of the offending spec.
struct ChainStepError : Error {
  ChainStepError(std::size_t index, const std::string& what)
      : Error("spec[" + std::to_string(index) + "]: " + what), index(index) {}
  std::size_t index;
};

// semantic gate
struct TranscriberUnavailable : Error { using Error::Error; };
struct TranscriptionFailed : Error { using Error::Error; };
struct EmptyReference : Error { using Error::Error; };
struct ScorerUnavailable : Error { using Error::Error; };
struct EmptySweep : Error { using Error::Error; };

// refusal objective
struct EmbedderUnavailable : Error { using Error::Error; };
struct EmptyReferenceSet : Error { using Error::Error; };

// model client
struct ModelUnavailable : Error { using Error::Error; };
struct AuthFailure : Error { using Error::Error; };
struct PayloadTooLarge : Error { using Error::Error; };

// evaluation harness
struct EmptyKeywordList : Error { using Error::Error; };
struct JudgeUnavailable : Error { using Error::Error; };
struct MalformedVerdict : Error { using Error::Error; };
struct UnknownSampleId : Error { using Error::Error; };
struct InsufficientPairs : Error { using Error::Error; };

// manifests / configuration
struct SchemaViolation : Error { using Error::Error; };
struct UnknownCategory : Error { using Error::Error; };

}  // namespace apbench
