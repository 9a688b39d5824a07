#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "approxsel/minhash.hpp"
#include "approxsel/tokenizer.hpp"
#include "oracle.hpp"

using namespace approxsel;

namespace {

std::vector<std::string> grams(const std::string& w) { return word_qgram_set(w, TokenizerConfig{}); }

}  // namespace

TEST(MinHash, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(MinHash, IdenticalWordsAgreeEverywhere) {
  const MinHasher h(5, 0x5eed);
  const auto a = h.signature(grams("HOTEL"));
  EXPECT_EQ(sim_mh(a, h.signature(grams("HOTEL"))), 1.0);
}

TEST(MinHash, EmptySet) {
  const MinHasher h(4, 1);
  const auto s = h.signature({});
  ASSERT_EQ(s.size(), 4u);
  for (auto v : s) EXPECT_EQ(v, MinHasher::empty_value);
}

TEST(MinHash, SeedDeterminesFamily) {
  const MinHasher a(5, 7), b(5, 7), c(5, 8);
  const auto g = grams("BEIJING");
  EXPECT_EQ(a.signature(g), b.signature(g));
  EXPECT_NE(a.signature(g), c.signature(g));
}

TEST(MinHash, MatchesOracle) {
  for (const char* w : {"BEIJING", "HOTEL", "AT&T", "X"}) {
    const auto g = grams(w);
    const std::set<std::string> gs(g.begin(), g.end());
    EXPECT_EQ(MinHasher(5, 0x5eed).signature(g), oracle::minhash_signature(gs, 5, 0x5eed)) << w;
  }
}

TEST(MinHash, UnbiasedOverSeeds) {
  const std::pair<const char*, const char*> pairs[] = {
      {"BEIJING", "BEJING"}, {"HOTEL", "HOTL"}, {"CORPORATION", "CORP."}, {"MORGAN", "MORGEN"}};
  for (const auto& [x, y] : pairs) {
    const auto gx = grams(x), gy = grams(y);
    const double j = oracle::set_jaccard(std::set<std::string>(gx.begin(), gx.end()),
                                 std::set<std::string>(gy.begin(), gy.end()));
    double sum = 0;
    const int trials = 2000;
    for (int s = 0; s < trials; ++s) {
      const MinHasher h(5, static_cast<std::uint64_t>(s) + 1);
      sum += sim_mh(h.signature(gx), h.signature(gy));
    }
    EXPECT_NEAR(sum / trials, j, 0.05) << x << " " << y;
  }
}

TEST(MinHash, SimRequiresEqualLength) {
  const std::vector<std::uint64_t> a{1, 2}, b{1};
  EXPECT_ANY_THROW(sim_mh(a, b));
}
