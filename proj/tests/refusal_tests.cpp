// Copyright 2026 The apbench authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <fstream>
#include <set>

#include "apbench/errors.hpp"
#include "apbench/refusal/embedding.hpp"
#include "apbench/refusal/reference_set.hpp"
#include "apbench/rng.hpp"
#include "apbench/text.hpp"
#include "doctest.h"
#include "support/test_util.hpp"

using namespace apbench;
using refusal::HashedBowEmbedder;
using refusal::RefusalReferenceSet;
using testutil::TempDir;

namespace {

// Confirms that no token of `a` lands in a hash bucket used by `b`; the
// disjoint-cosine oracle is only valid collision-free.
bool buckets_disjoint(const std::string& a, const std::string& b) {
  std::set<std::size_t> ba, bb;
  for (const auto& t : text::tokenize(a)) ba.insert(HashedBowEmbedder::bucket(t));
  for (const auto& t : text::tokenize(b)) bb.insert(HashedBowEmbedder::bucket(t));
  std::vector<std::size_t> common;
  std::set_intersection(ba.begin(), ba.end(), bb.begin(), bb.end(),
                        std::back_inserter(common));
  return common.empty();
}

}  // namespace

TEST_CASE("embedding is deterministic and unit-norm") {
  HashedBowEmbedder embedder;
  const auto a = embedder.embed("some response text here");
  const auto b = embedder.embed("some response text here");
  REQUIRE(a.dim() == HashedBowEmbedder::kDim);
  for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.components[i] == b.components[i]);
  CHECK(std::abs(a.l2_norm() - 1.0) <= 1e-6);
}

TEST_CASE("empty text embeds to the degenerate zero vector") {
  HashedBowEmbedder embedder;
  const auto z = embedder.embed("");
  CHECK(z.is_zero());
  const auto w = embedder.embed("words");
  CHECK(refusal::cosine(z, w) == 0.0);
}

TEST_CASE("disjoint token sets give cosine zero") {
  const std::string a = "alpha bravo charlie delta";
  const std::string b = "echo foxtrot golf hotel";
  REQUIRE(buckets_disjoint(a, b));  // oracle precondition
  HashedBowEmbedder embedder;
  CHECK(refusal::cosine(embedder.embed(a), embedder.embed(b)) == doctest::Approx(0.0));
}

TEST_CASE("refusal similarity is 1 for a response present in the set") {
  HashedBowEmbedder embedder;
  const auto refs = RefusalReferenceSet::from_phrases(
      {"Sorry, I can't assist with that.", "I cannot help with this request.",
       "That request violates policy."},
      embedder);
  for (const auto& phrase : refs.phrases()) {
    CHECK(refusal::refusal_similarity(phrase, refs, embedder) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("token-disjoint responses score zero") {
  HashedBowEmbedder embedder;
  const std::string phrase = "sorry i cannot assist";
  const std::string response = "quartz lumen viaduct ember";
  REQUIRE(buckets_disjoint(phrase, response));
  const auto refs = RefusalReferenceSet::from_phrases({phrase}, embedder);
  CHECK(refusal::refusal_similarity(response, refs, embedder) == doctest::Approx(0.0));
}

TEST_CASE("empty reference sets are rejected") {
  HashedBowEmbedder embedder;
  CHECK_THROWS_AS(RefusalReferenceSet::from_phrases({}, embedder), EmptyReferenceSet);
}

TEST_CASE("adding a reference phrase never decreases the score") {
  HashedBowEmbedder embedder;
  const std::vector<std::string> phrases = {
      "sorry i cannot assist with that",
      "i am unable to help",
      "that would violate policy",
      "i will not provide this",
  };
  const std::string response = "sorry but i think policy does not allow this";
  double prev = -1.0;
  for (std::size_t n = 1; n <= phrases.size(); ++n) {
    const auto refs = RefusalReferenceSet::from_phrases(
        std::vector<std::string>(phrases.begin(), phrases.begin() + n), embedder);
    const double score = refusal::refusal_similarity(response, refs, embedder);
    CHECK(score >= prev - 1e-12);
    prev = score;
  }
}

TEST_CASE("refusal similarity ignores reference order") {
  HashedBowEmbedder embedder;
  std::vector<std::string> phrases = {
      "sorry i cannot assist", "i refuse to answer", "this is not allowed",
  };
  const std::string response = "i suspect this is not generally allowed";
  const auto fwd = RefusalReferenceSet::from_phrases(phrases, embedder);
  std::reverse(phrases.begin(), phrases.end());
  const auto rev = RefusalReferenceSet::from_phrases(phrases, embedder);
  CHECK(refusal::refusal_similarity(response, fwd, embedder) ==
        doctest::Approx(refusal::refusal_similarity(response, rev, embedder)));
}

TEST_CASE("reference sets load from line-delimited files with a digest") {
  TempDir dir("refs");
  const auto path = dir.path() / "refusals.txt";
  {
    std::ofstream out(path);
    out << "# common refusal openers\n";
    out << "Sorry, I can't assist with that.\n";
    out << "\n";
    out << "I cannot help with that request.\n";
  }
  HashedBowEmbedder embedder;
  const auto refs = RefusalReferenceSet::load(path, embedder);
  REQUIRE(refs.phrases().size() == 2);
  CHECK(refs.phrases()[0] == "Sorry, I can't assist with that.");
  CHECK(refs.source_digest() != 0);
  CHECK(refs.embedder_name() == embedder.name());
}
