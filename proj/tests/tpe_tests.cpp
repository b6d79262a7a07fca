// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "apbench/errors.hpp"
#include "apbench/gate/gate.hpp"
#include "apbench/gate/scorer.hpp"
#include "apbench/model/client.hpp"
#include "apbench/rng.hpp"
#include "apbench/tpe/decode.hpp"
#include "apbench/tpe/halton.hpp"
#include "apbench/tpe/optimize.hpp"
#include "apbench/tpe/sampler.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace apbench;
using perturb::NoiseBank;
using perturb::NoiseEvent;
using perturb::PerturbationKind;
using tpe::SearchPoint;
using tpe::TpeConfig;
using tpe::Trial;
using testutil::make_white_noise;

namespace {

bool in_unit_square(const SearchPoint& p) {
  return p.p1 >= 0.0 && p.p1 <= 1.0 && p.p2 >= 0.0 && p.p2 <= 1.0;
}

Trial make_trial(double p1, double p2, double score, int index) {
  Trial t;
  t.point = {p1, p2};
  t.score = score;
  t.index = index;
  return t;
}

NoiseBank full_bank(int sample_rate) {
  std::map<NoiseEvent, std::vector<NoiseBank::Asset>> assets;
  for (NoiseEvent e : {NoiseEvent::kRain, NoiseEvent::kCry, NoiseEvent::kHorn,
                       NoiseEvent::kMusic}) {
    audio::AudioBuffer a = make_white_noise(sample_rate / 4,
                                            sample_rate, 900 + static_cast<int>(e), 0.01);
    assets[e].push_back(NoiseBank::Asset{std::string(to_string(e)) + "_0.wav", a});
  }
  return NoiseBank::from_memory(std::move(assets));
}

struct PlantedFixture {
  audio::AudioBuffer original;
  NoiseBank bank;
  refusal::HashedBowEmbedder embedder;
  std::unique_ptr<refusal::RefusalReferenceSet> refs;
  std::unique_ptr<model::ModelClient> client;
  gate::GateConfig gate_cfg;

  PlantedFixture(const std::string& endpoint, const std::string& sample_id) {
    original = make_white_noise(32000, 16000, 321, 0.3);  // 2.0 s
    bank = full_bank(16000);
    refs = std::make_unique<refusal::RefusalReferenceSet>(
        refusal::RefusalReferenceSet::from_phrases({model::mock_refusal_text()}, embedder));
    client = std::make_unique<model::ModelClient>(
        model::ModelEndpointConfig{.endpoint = endpoint});
    gate_cfg.scorer = std::make_shared<gate::EditDistanceScorer>();
    auto transcriber = std::make_shared<gate::IdentityTranscriber>();
    transcriber->register_text(sample_id, "the spoken prompt");
    gate_cfg.transcriber = transcriber;
  }

  tpe::OptimizeContext context(const TpeConfig& cfg) {
    tpe::OptimizeContext ctx;
    ctx.model = client.get();
    ctx.refs = refs.get();
    ctx.embedder = &embedder;
    ctx.gate_config = &gate_cfg;
    ctx.noise_bank = &bank;
    ctx.tpe = cfg;
    return ctx;
  }
};

}  // namespace

TEST_CASE("halton radical inverse values for base 2") {
  CHECK(tpe::halton(1, 2) == doctest::Approx(0.5));
  CHECK(tpe::halton(2, 2) == doctest::Approx(0.25));
  CHECK(tpe::halton(3, 2) == doctest::Approx(0.75));
  CHECK(tpe::halton(4, 2) == doctest::Approx(0.125));
  CHECK(tpe::halton(1, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(tpe::halton(2, 3) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("suggest stays inside the unit square") {
  TpeConfig cfg;
  cfg.rng_seed = 5;

  SUBCASE("empty history") { CHECK(in_unit_square(tpe::suggest({}, cfg))); }

  SUBCASE("identical scores fall back gracefully") {
    std::vector<Trial> history;
    for (int i = 0; i < 20; ++i) {
      history.push_back(make_trial(tpe::halton(i + 1, 2), tpe::halton(i + 1, 3), 1.0, i));
    }
    CHECK(in_unit_square(tpe::suggest(history, cfg)));
  }

  SUBCASE("random histories") {
    DeterministicRng rng(99);
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<Trial> history;
      const int n = 5 + static_cast<int>(rng.uniform_index(40));
      for (int i = 0; i < n; ++i) {
        history.push_back(
            make_trial(rng.uniform01(), rng.uniform01(), rng.uniform01(), i));
      }
      cfg.rng_seed = rng.next_u64();
      CHECK(in_unit_square(tpe::suggest(history, cfg)));
    }
  }
}

TEST_CASE("suggest is deterministic for fixed history and config") {
  TpeConfig cfg;
  cfg.rng_seed = 1234;
  std::vector<Trial> history;
  DeterministicRng rng(5);
  for (int i = 0; i < 25; ++i) {
    history.push_back(make_trial(rng.uniform01(), rng.uniform01(), rng.uniform01(), i));
  }
  const SearchPoint a = tpe::suggest(history, cfg);
  const SearchPoint b = tpe::suggest(history, cfg);
  CHECK(a.p1 == b.p1);
  CHECK(a.p2 == b.p2);
}

TEST_CASE("non-finite scores are rejected") {
  TpeConfig cfg;
  std::vector<Trial> history = {make_trial(0.5, 0.5, std::nan(""), 0)};
  CHECK_THROWS_AS(tpe::suggest(history, cfg), Error);
}

TEST_CASE("decode_point maps the bitmask and intensity") {
  const perturb::SafeRanges ranges;

  SUBCASE("p1 = 0 activates only the first kind") {
    const auto specs = tpe::decode_point({0.0, 0.5}, ranges, 1);
    REQUIRE(specs.size() == 1);
    CHECK(specs[0].kind == PerturbationKind::kEnergyDistribution);
  }

  SUBCASE("p1 = 1 activates all seven kinds") {
    const auto specs = tpe::decode_point({1.0, 0.5}, ranges, 1);
    CHECK(specs.size() == 7);
  }

  SUBCASE("p2 endpoints hit the safe-range endpoints") {
    const auto lo = tpe::decode_point({1.0, 0.0}, ranges, 1);
    CHECK(lo[0].theta == doctest::Approx(ranges.energy_scale.lo));
    CHECK(lo[1].theta == doctest::Approx(ranges.trim_seconds.lo));
    CHECK(lo[2].theta == doctest::Approx(ranges.fade_seconds.lo));
    CHECK(lo[3].theta == doctest::Approx(ranges.pitch_semitones.lo));
    CHECK(lo[4].theta == doctest::Approx(ranges.temporal_rate.lo));
    CHECK(lo[5].theta == doctest::Approx(0.0));  // infrasound
    CHECK(lo[6].theta == doctest::Approx(0.0));  // Rain

    const auto hi = tpe::decode_point({1.0, 1.0}, ranges, 1);
    CHECK(hi[0].theta == doctest::Approx(ranges.energy_scale.hi));
    CHECK(hi[4].theta == doctest::Approx(ranges.temporal_rate.hi));
    CHECK(hi[5].theta == doctest::Approx(1.0));  // ultrasound
    CHECK(hi[6].theta == doctest::Approx(3.0));  // Music
  }

  SUBCASE("masks stay within [1, 127] and chains within seven rounds") {
    DeterministicRng rng(3);
    for (int i = 0; i < 200; ++i) {
      const auto specs = tpe::decode_point({rng.uniform01(), rng.uniform01()}, ranges, i);
      CHECK(specs.size() >= 1);
      CHECK(specs.size() <= 7);
    }
  }
}

TEST_CASE("tpe beats random search on a smooth toy objective") {
  auto objective = [](const SearchPoint& p) {
    const double dx = p.p1 - 0.3;
    const double dy = p.p2 - 0.7;
    return dx * dx + dy * dy;
  };

  std::vector<double> best_tpe, best_random;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TpeConfig cfg;
    cfg.rng_seed = seed;
    std::vector<Trial> history;
    double best = 1e9;
    for (int i = 0; i < 60; ++i) {
      const SearchPoint p = tpe::suggest(history, cfg);
      const double y = objective(p);
      history.push_back(make_trial(p.p1, p.p2, y, i));
      best = std::min(best, y);
    }
    best_tpe.push_back(best);

    DeterministicRng rng(mix_seed(seed, 0xabcdef));
    double best_r = 1e9;
    for (int i = 0; i < 60; ++i) {
      best_r = std::min(best_r, objective({rng.uniform01(), rng.uniform01()}));
    }
    best_random.push_back(best_r);
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median(best_tpe) < median(best_random));
}

TEST_CASE("optimize finds the planted time-stretch threshold") {
  // Comply once the input runs at least 1.25x the registered duration, i.e.
  // a stretch rate below 0.8.
  const std::string id = "sample-1";
  PlantedFixture fx("mock:planted?baseline_ms=2000&mode=ratio&threshold=1.25", id);

  TpeConfig cfg;
  cfg.budget = 60;
  cfg.rng_seed = 7;
  auto ctx = fx.context(cfg);

  const auto result = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  REQUIRE(result.trials.size() == 60);
  CHECK_FALSE(result.aborted);
  CHECK(result.best().score < 0.2);
  // best() really is the minimum
  for (const Trial& t : result.trials) CHECK(result.best().score <= t.score);
  // the winning chain slows the audio down
  bool has_slow_stretch = false;
  for (const auto& step : result.best().record.steps) {
    if (step.spec.kind == PerturbationKind::kTemporalScale && step.spec.theta < 0.8) {
      has_slow_stretch = true;
    }
  }
  CHECK(has_slow_stretch);
}

TEST_CASE("a budget equal to n_startup runs quasi-random only") {
  const std::string id = "sample-2";
  PlantedFixture fx("mock:always-refuse", id);

  TpeConfig cfg;
  cfg.budget = cfg.n_startup;  // 10
  cfg.rng_seed = 3;
  auto ctx = fx.context(cfg);
  const auto result = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  REQUIRE(result.trials.size() == 10);
  const auto offset = tpe::halton_offset(cfg.rng_seed);
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    CHECK(result.trials[i].point.p1 == doctest::Approx(tpe::halton(offset + i, 2)));
    CHECK(result.trials[i].point.p2 == doctest::Approx(tpe::halton(offset + i, 3)));
  }
  double best = 2.0;
  for (const Trial& t : result.trials) best = std::min(best, t.score);
  CHECK(result.best().score == doctest::Approx(best));
}

TEST_CASE("optimize is bit-identical across runs with fixed seeds") {
  const std::string id = "sample-3";
  PlantedFixture fx("mock:planted?baseline_ms=2000&mode=ratio&threshold=1.25", id);

  TpeConfig cfg;
  cfg.budget = 25;
  cfg.rng_seed = 42;

  auto ctx = fx.context(cfg);
  const auto a = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  const auto b = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].point.p1 == b.trials[i].point.p1);
    CHECK(a.trials[i].point.p2 == b.trials[i].point.p2);
    CHECK(a.trials[i].score == b.trials[i].score);
    CHECK(a.trials[i].response_text == b.trials[i].response_text);
  }
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("model failure aborts the sample but keeps the partial history") {
  const std::string id = "sample-5";
  PlantedFixture fx("mock:always-refuse", id);
  // swap in an unreachable endpoint with fast-failing retries
  model::ModelEndpointConfig broken;
  broken.endpoint = "http://127.0.0.1:1";
  broken.timeout_seconds = 0.2;
  broken.max_retries = 0;
  broken.backoff_initial_ms = 1.0;
  model::ModelClient dead(broken);
  TpeConfig cfg;
  cfg.budget = 20;
  auto ctx = fx.context(cfg);
  ctx.model = &dead;
  const auto result = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  CHECK(result.aborted);
  CHECK_FALSE(result.abort_reason.empty());
  CHECK(result.trials.size() < 20);  // partial history preserved, loop stopped
}

TEST_CASE("gate-rejected trials carry the sentinel score") {
  const std::string id = "sample-4";
  PlantedFixture fx("mock:always-comply", id);
  // An impossible threshold turns every trial into a gate rejection.
  fx.gate_cfg.tau = 1.01;

  TpeConfig cfg;
  cfg.budget = 12;
  cfg.rng_seed = 9;
  auto ctx = fx.context(cfg);
  const auto result = tpe::optimize(id, "the spoken prompt", fx.original, ctx);
  REQUIRE(result.trials.size() == 12);
  for (const Trial& t : result.trials) {
    CHECK(t.rejected);
    CHECK(t.score == 1.0);
  }
}
