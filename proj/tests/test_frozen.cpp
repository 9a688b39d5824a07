// Library scores against oracle values frozen in golden/oracle/frozen.tsv.

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "approxsel/index.hpp"
#include "approxsel/predicates.hpp"
#include "approxsel/strdist.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace approxsel;

namespace {

using Key = std::tuple<std::string, std::string, std::size_t>;  // fixture, predicate, query
using Frozen = std::map<Key, std::map<Tid, double>>;

Frozen load() {
  std::ifstream in(std::string(APPROXSEL_GOLDEN_DIR) + "/oracle/frozen.tsv");
  Frozen out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string fixture, pred, qi, tid, score;
    std::getline(row, fixture, '\t');
    std::getline(row, pred, '\t');
    std::getline(row, qi, '\t');
    std::getline(row, tid, '\t');
    std::getline(row, score, '\t');
    out[{fixture, pred, std::stoul(qi)}][std::stoll(tid)] = std::strtod(score.c_str(), nullptr);
  }
  return out;
}

std::map<Tid, double> as_map(const RankedResult& r) {
  std::map<Tid, double> m;
  for (const auto& row : r.rows) m[row.tid] = row.score;
  return m;
}

void expect_close(const std::map<Tid, double>& got, const std::map<Tid, double>& want,
                  const std::string& what) {
  ASSERT_EQ(got.size(), want.size()) << what;
  for (const auto& [tid, v] : want) {
    ASSERT_TRUE(got.count(tid)) << what << " tid " << tid;
    EXPECT_NEAR(got.at(tid), v, 1e-9 * std::max(1.0, std::abs(v))) << what << " tid " << tid;
  }
}

}  // namespace

TEST(Frozen, FileIsNonTrivial) {
  const auto frozen = load();
  EXPECT_GT(frozen.size(), 100u);
}

TEST(Frozen, OracleStillProducesFrozenValues) {
  const auto frozen = load();
  const oracle::Tok tok;
  for (const auto& f : fixtures::all()) {
    for (std::size_t qi = 0; qi < f.queries.size(); ++qi) {
      const auto& q = f.queries[qi];
      const auto check = [&](const char* pred, const oracle::Scores& s) {
        const auto it = frozen.find({f.name, pred, qi});
        const std::map<Tid, double> want = it == frozen.end() ? std::map<Tid, double>{} : it->second;
        std::map<Tid, double> got(s.begin(), s.end());
        expect_close(got, want, f.name + "/" + pred + "/" + q);
      };
      check("cosine", oracle::cosine(f.records, q, tok));
      check("lm", oracle::lm(f.records, q, tok));
      check("soft_tfidf", oracle::soft_tfidf(f.records, q, 0.8));
    }
  }
}

TEST(Frozen, LibraryMatchesFrozenValues) {
  const auto frozen = load();
  for (const auto& f : fixtures::all()) {
    const auto index = build_index(f.records, IndexConfig{});
    for (std::size_t qi = 0; qi < f.queries.size(); ++qi) {
      const auto& q = f.queries[qi];
      QueryParams p;
      p.edit_theta = 0.5;
      const std::pair<const char*, RankedResult> rows[] = {
          {"intersect", score_intersect(index, q)},
          {"jaccard", score_jaccard(index, q)},
          {"weighted_match", score_weighted_match(index, q)},
          {"weighted_jaccard", score_weighted_jaccard(index, q)},
          {"cosine", score_cosine(index, q)},
          {"bm25", score_bm25(index, q)},
          {"lm", score_lm(index, q)},
          {"hmm", score_hmm(index, q)},
          {"edit", rank(index, Predicate::edit, q, p)},
          {"ges", rank(index, Predicate::ges, q, p)},
          {"ges_jaccard_filter", ges_jaccard_score(index, q, 0.0)},
          {"soft_tfidf", rank(index, Predicate::soft_tfidf, q, p)},
      };
      for (const auto& [pred, ranked] : rows) {
        const auto it = frozen.find({f.name, pred, qi});
        const std::map<Tid, double> want = it == frozen.end() ? std::map<Tid, double>{} : it->second;
        expect_close(as_map(ranked), want, f.name + "/" + pred + "/" + q);
      }
    }
  }
}

// A few values worked out by hand, independent of both implementations.
TEST(Frozen, HandValues) {
  const auto frozen = load();
  // "db lab" vs itself: $D DB B$ $L LA AB B$, six distinct.
  EXPECT_EQ(frozen.at({"toy", "intersect", 0}).at(10), 6.0);
  // "db lab" vs "lab db": same bigram set once padded.
  EXPECT_EQ(frozen.at({"toy", "jaccard", 0}).at(20), 1.0);
  // Self cosine.
  EXPECT_NEAR(frozen.at({"companies", "cosine", 0}).at(1), 1.0, 1e-12);
}
