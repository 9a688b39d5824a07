#include <algorithm>
#include <cmath>

#include "approxsel/error.hpp"
#include "approxsel/minhash.hpp"
#include "approxsel/strdist.hpp"

namespace approxsel {

namespace {

// Sparse view over a dense array: only touched slots are cleared.
template <class T>
class DenseMap {
 public:
  explicit DenseMap(std::size_t n) : value_(n, T{}), seen_(n, 0) {}

  T& operator[](std::uint32_t key) {
    if (!seen_[key]) {
      seen_[key] = 1;
      keys_.push_back(key);
    }
    return value_[key];
  }
  bool contains(std::uint32_t key) const { return seen_[key] != 0; }
  const T& at(std::uint32_t key) const { return value_[key]; }
  const std::vector<std::uint32_t>& keys() const { return keys_; }

  void clear() {
    for (auto k : keys_) {
      value_[k] = T{};
      seen_[k] = 0;
    }
    keys_.clear();
  }

 private:
  std::vector<T> value_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint32_t> keys_;
};

const WordTables& word_tables(const Index& index, Predicate p) {
  index.require(p);
  return *index.tables().words;
}

struct QueryWord {
  std::string text;
  std::uint32_t tf = 0;
  double weight = 0.0;  // w(t), once per distinct word
};

std::vector<QueryWord> query_words(const Index& index, std::string_view query) {
  const auto& cfg = index.config().tokenizer;
  std::vector<QueryWord> out;
  for (auto& e : count_tokens(word_tokenize(query, cfg.case_fold)).entries) {
    const double w = word_weight(index, e.token);
    out.push_back({std::move(e.token), e.count, w});
  }
  return out;
}

// Vocabulary words sharing a q-gram with `word`, with their Jaccard similarity.
std::vector<std::pair<TokenId, double>> jaccard_neighbours(const Index& index,
                                                           std::string_view word,
                                                           DenseMap<std::uint32_t>& shared) {
  const auto& words = *index.tables().words;
  const auto& inv = index.word_qgram_postings();
  const auto grams = word_qgram_set(word, index.config().tokenizer);
  shared.clear();
  for (const auto& g : grams) {
    const auto id = words.qgrams.vocab.find(g);
    if (!id) {
      continue;
    }
    const auto [begin, end] = inv.range(*id);
    for (auto p = begin; p < end; ++p) {
      shared[inv.doc[p]] += 1;
    }
  }
  std::vector<std::pair<TokenId, double>> out;
  for (auto r : shared.keys()) {
    const auto [begin, end] = words.qgrams.row_range(r);
    const double inter = shared.at(r);
    const double uni = static_cast<double>(grams.size() + (end - begin)) - inter;
    out.emplace_back(r, inter / uni);
  }
  return out;
}

// Vocabulary words agreeing with `word` on at least one min-hash component.
std::vector<std::pair<TokenId, double>> minhash_neighbours(const Index& index,
                                                           const MinHasher& hasher,
                                                           std::string_view word,
                                                           DenseMap<std::uint32_t>& agree) {
  const auto& lookup = index.minhash_lookup();
  const auto sig = hasher.signature(word_qgram_set(word, index.config().tokenizer));
  agree.clear();
  for (std::size_t f = 0; f < sig.size(); ++f) {
    if (sig[f] == MinHasher::empty_value) {
      continue;
    }
    const auto it = lookup[f].find(sig[f]);
    if (it == lookup[f].end()) {
      continue;
    }
    for (auto r : it->second) {
      agree[r] += 1;
    }
  }
  std::vector<std::pair<TokenId, double>> out;
  const double h = static_cast<double>(sig.size());
  for (auto r : agree.keys()) {
    out.emplace_back(r, agree.at(r) / h);
  }
  return out;
}

// Shared scoring of both GES filters:
// (1 / wt(Q)) * sum_t w(t) * min(1, (2/q) * max_r sim(t, r) + 1 - 1/q),
// where max_r is 0 for tuples with no neighbour of t.
template <class Neighbours>
RankedResult ges_filter(const Index& index, std::string_view query, double theta,
                        Neighbours&& neighbours) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    fail("invalid_argument", "GES threshold must be in [0, 1]");
  }
  const auto& t = index.tables();
  const int q = t.config.tokenizer.q;
  const auto qwords = query_words(index, query);
  double wt = 0.0;
  for (const auto& w : qwords) {
    wt += w.weight;
  }
  RankedResult out;
  if (!(wt > 0.0)) {
    return out;
  }

  const auto n = index.num_docs();
  DenseMap<double> acc(n);
  DenseMap<double> matched(n);
  DenseMap<double> best(n);
  const auto& inv = index.word_postings();
  for (const auto& qw : qwords) {
    best.clear();
    for (const auto& [r, sim] : neighbours(qw.text)) {
      const auto [begin, end] = inv.range(r);
      for (auto p = begin; p < end; ++p) {
        auto& b = best[inv.doc[p]];
        b = std::max(b, sim);
      }
    }
    for (auto d : best.keys()) {
      acc[d] += qw.weight * ges_word_term(best.at(d), q);
      matched[d] += qw.weight;
    }
  }
  const double floor_term = ges_word_term(0.0, q);
  for (auto d : acc.keys()) {
    const double score = (acc.at(d) + (wt - matched.at(d)) * floor_term) / wt;
    if (score >= theta) {
      out.rows.push_back({t.grams.tids[d], score});
    }
  }
  sort_ranking(out.rows);
  return out;
}

}  // namespace

double word_weight(const Index& index, std::string_view word) {
  const auto& words = *index.tables().words;
  if (auto id = words.corpus.table.vocab.find(word)) {
    return words.corpus.stats.tokens[*id].idf;
  }
  return words.avg_idf;
}

std::vector<Tid> qgram_count_filter(const Index& index, std::string_view query, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) {
    fail("invalid_argument", "edit similarity threshold must be in (0, 1]");
  }
  index.require(Predicate::edit);
  const auto& t = index.tables();
  const auto& e = *t.edit;
  const auto& cfg = t.config.tokenizer;
  const auto& inv = index.edit_postings();
  const auto n = index.num_docs();

  std::vector<std::uint32_t> shared(n, 0);
  for (const auto& g : count_tokens(edit_qgrams(query, cfg)).entries) {
    const auto id = e.grams.vocab.find(g.token);
    if (!id) {
      continue;
    }
    const auto [begin, end] = inv.range(*id);
    for (auto p = begin; p < end; ++p) {
      shared[inv.doc[p]] += std::min(g.count, e.grams.tf[inv.row[p]]);
    }
  }

  const auto lq = static_cast<std::int64_t>(query.size());
  const auto q = static_cast<std::int64_t>(cfg.q);
  std::vector<Tid> out;
  for (std::size_t d = 0; d < n; ++d) {
    const auto ld = static_cast<std::int64_t>(e.length[d]);
    const auto longest = std::max(lq, ld);
    const auto k = static_cast<std::int64_t>(std::ceil((1.0 - theta) * static_cast<double>(longest)));
    if (std::abs(lq - ld) > k) {
      continue;
    }
    const auto bound = longest + q - 1 - k * q;
    if (static_cast<std::int64_t>(shared[d]) >= bound) {
      out.push_back(t.grams.tids[d]);
    }
  }
  return out;
}

RankedResult score_edit(const Index& index, std::string_view query, double theta) {
  const auto candidates = qgram_count_filter(index, query, theta);
  const auto& t = index.tables();
  const auto& cfg = t.config.tokenizer;
  const auto nq = edit_normalize(query, cfg);
  RankedResult out;
  for (auto tid : candidates) {
    const auto& rec = t.records[*index.doc_of(tid)];
    const double sim = edit_similarity(nq, edit_normalize(rec.text, cfg));
    if (sim >= theta) {
      out.rows.push_back({tid, sim});
    }
  }
  sort_ranking(out.rows);
  return out;
}

RankedResult score_ges(const Index& index, std::string_view query, double c_ins) {
  if (!(c_ins >= 0.0 && c_ins <= 1.0)) {
    fail("invalid_argument", "c_ins must be in [0, 1]");
  }
  const auto& words = word_tables(index, Predicate::ges);
  const auto& t = index.tables();
  const auto& inv = index.word_postings();
  DenseMap<std::uint32_t> shared(words.corpus.table.vocab.size());
  DenseMap<std::uint8_t> joined(index.num_docs());
  for (const auto& w : word_tokenize(query, t.config.tokenizer.case_fold)) {
    for (const auto& [r, sim] : jaccard_neighbours(index, w, shared)) {
      const auto [begin, end] = inv.range(r);
      for (auto p = begin; p < end; ++p) {
        joined[inv.doc[p]] = 1;
      }
    }
  }
  const WordWeight weight = [&index](std::string_view w) { return word_weight(index, w); };
  RankedResult out;
  for (auto d : joined.keys()) {
    out.rows.push_back({t.grams.tids[d], ges_exact(query, t.records[d].text, weight, c_ins,
                                                   t.config.tokenizer.case_fold)});
  }
  sort_ranking(out.rows);
  return out;
}

RankedResult verify_ges(const Index& index, std::string_view query, const RankedResult& candidates,
                        double c_ins) {
  if (!(c_ins >= 0.0 && c_ins <= 1.0)) {
    fail("invalid_argument", "c_ins must be in [0, 1]");
  }
  const auto& t = index.tables();
  const WordWeight weight = [&index](std::string_view w) { return word_weight(index, w); };
  RankedResult out;
  for (const auto& c : candidates.rows) {
    const auto& rec = t.records[*index.doc_of(c.tid)];
    out.rows.push_back(
        {c.tid, ges_exact(query, rec.text, weight, c_ins, t.config.tokenizer.case_fold)});
  }
  sort_ranking(out.rows);
  return out;
}

RankedResult ges_jaccard_score(const Index& index, std::string_view query, double theta) {
  const auto& words = word_tables(index, Predicate::ges_jaccard);
  DenseMap<std::uint32_t> shared(words.corpus.table.vocab.size());
  return ges_filter(index, query, theta, [&](std::string_view w) {
    return jaccard_neighbours(index, w, shared);
  });
}

RankedResult ges_apx_score(const Index& index, std::string_view query, double theta) {
  const auto& words = word_tables(index, Predicate::ges_apx);
  const auto& mh = *index.tables().minhash;
  const MinHasher hasher(mh.size, mh.seed);
  DenseMap<std::uint32_t> agree(words.corpus.table.vocab.size());
  return ges_filter(index, query, theta, [&](std::string_view w) {
    return minhash_neighbours(index, hasher, w, agree);
  });
}

RankedResult soft_tfidf_score(const Index& index, std::string_view query, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    fail("invalid_argument", "SoftTFIDF threshold must be in (0, 1)");
  }
  const auto& words = word_tables(index, Predicate::soft_tfidf);
  const auto& t = index.tables();
  const auto& vocab = words.corpus.table.vocab;
  const auto& wd = words.cosine.weight;
  const auto& inv = index.word_postings();

  // Query weights: normalized tf-idf over words the relation knows.
  std::vector<std::pair<TokenId, double>> qw;
  double norm = 0.0;
  for (const auto& e : count_tokens(word_tokenize(query, t.config.tokenizer.case_fold)).entries) {
    if (auto id = vocab.find(e.token)) {
      const double w = e.count * words.corpus.stats.tokens[*id].idf;
      qw.emplace_back(*id, w);
      norm += w * w;
    }
  }
  norm = std::sqrt(norm);
  RankedResult out;
  if (!(norm > 0.0)) {
    return out;
  }

  const auto n = index.num_docs();
  DenseMap<double> acc(n);
  DenseMap<double> best(n);
  DenseMap<double> best_weight(n);
  for (const auto& [qid, w] : qw) {
    const auto& text = vocab.str(qid);
    best.clear();
    best_weight.clear();
    for (std::size_t r = 0; r < vocab.size(); ++r) {
      const double sim = jaro_winkler(text, vocab.str(static_cast<TokenId>(r)));
      if (!(sim > theta)) {
        continue;
      }
      const auto [begin, end] = inv.range(static_cast<TokenId>(r));
      for (auto p = begin; p < end; ++p) {
        const auto d = inv.doc[p];
        const bool fresh = !best.contains(d);
        auto& b = best[d];
        auto& bw = best_weight[d];
        if (fresh || sim > b || (sim == b && wd[inv.row[p]] > bw)) {
          b = sim;
          bw = wd[inv.row[p]];
        }
      }
    }
    for (auto d : best.keys()) {
      acc[d] += (w / norm) * best_weight.at(d) * best.at(d);
    }
  }
  for (auto d : acc.keys()) {
    out.rows.push_back({t.grams.tids[d], acc.at(d)});
  }
  sort_ranking(out.rows);
  return out;
}

}  // namespace approxsel
