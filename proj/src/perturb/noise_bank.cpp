// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "apbench/perturb/noise_bank.hpp"

#include <algorithm>

#include "apbench/audio/wav.hpp"
#include "apbench/errors.hpp"
#include "apbench/rng.hpp"

namespace apbench::perturb {

NoiseBank NoiseBank::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw MissingAsset("noise bank directory not found: " + dir.string());
  }
  NoiseBank bank;
  for (NoiseEvent event : {NoiseEvent::kRain, NoiseEvent::kCry, NoiseEvent::kHorn,
                           NoiseEvent::kMusic}) {
    const std::filesystem::path event_dir = dir / std::string(to_string(event));
    if (!std::filesystem::is_directory(event_dir)) continue;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(event_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".wav") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());  // stable pick order
    for (const auto& f : files) {
      bank.assets_[event].push_back(Asset{f.filename().string(), audio::load_wav(f)});
    }
  }
  return bank;
}

NoiseBank NoiseBank::from_memory(std::map<NoiseEvent, std::vector<Asset>> assets) {
  NoiseBank bank;
  bank.assets_ = std::move(assets);
  return bank;
}

const NoiseBank::Asset& NoiseBank::pick(NoiseEvent event, std::uint64_t seed) const {
  const auto it = assets_.find(event);
  if (it == assets_.end() || it->second.empty()) {
    throw MissingAsset("no noise assets for event " + std::string(to_string(event)));
  }
  DeterministicRng rng(mix_seed(seed, 0x6e6f697365ULL));
  return it->second[rng.uniform_index(it->second.size())];
}

bool NoiseBank::has_assets(NoiseEvent event) const {
  const auto it = assets_.find(event);
  return it != assets_.end() && !it->second.empty();
}

}  // namespace apbench::perturb
