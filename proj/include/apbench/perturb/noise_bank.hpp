// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "apbench/audio/buffer.hpp"
#include "apbench/perturb/kinds.hpp"

namespace apbench::perturb {

// Immutable bank of natural-noise assets keyed by event. Loaded once, then
// shared read-only.
class NoiseBank {
 public:
  struct Asset {
    std::string name;  // file name or synthetic label, recorded for replay
    audio::AudioBuffer audio;
  };

  NoiseBank() = default;

  // Layout: <dir>/<event>/<n>.wav with event in {Rain, Cry, Horn, Music}.
  // Events without a directory simply have no assets.
  static NoiseBank from_directory(const std::filesystem::path& dir);

  static NoiseBank from_memory(std::map<NoiseEvent, std::vector<Asset>> assets);

  // Deterministically picks an instance for the event. Throws MissingAsset
  // when the event has none.
  const Asset& pick(NoiseEvent event, std::uint64_t seed) const;

  bool has_assets(NoiseEvent event) const;

 private:
  std::map<NoiseEvent, std::vector<Asset>> assets_;
};

}  // namespace apbench::perturb
