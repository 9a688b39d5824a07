#include "approxsel/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "approxsel/error.hpp"

namespace approxsel {

TokenId Vocabulary::intern(std::string_view token) {
  if (auto it = ids_.find(token); it != ids_.end()) {
    return it->second;
  }
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(token); it != ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

Corpus corpus_from_tokens(std::vector<Tid> tids, std::span<const TokenMultiset> docs) {
  if (tids.size() != docs.size()) {
    fail("invalid_argument", "tid count does not match tuple count");
  }
  {
    std::unordered_set<Tid> seen;
    seen.reserve(tids.size());
    for (std::size_t i = 0; i < tids.size(); ++i) {
      if (!seen.insert(tids[i]).second) {
        fail("duplicate_tid",
             "duplicate tid " + std::to_string(tids[i]) + " at row " + std::to_string(i));
      }
    }
  }

  Corpus corpus;
  corpus.tids = std::move(tids);
  auto& table = corpus.table;
  std::vector<std::pair<TokenId, std::uint32_t>> rows;
  for (const auto& doc : docs) {
    rows.clear();
    for (const auto& e : doc.entries) {
      rows.emplace_back(table.vocab.intern(e.token), e.count);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [tok, tf] : rows) {
      table.token.push_back(tok);
      table.tf.push_back(tf);
    }
    table.offsets.push_back(table.token.size());
  }
  corpus.stats.num_tuples = corpus.tids.size();
  recompute_stats(corpus);
  return corpus;
}

Corpus build_corpus(std::span<const Record> records, const TokenizerConfig& cfg) {
  cfg.validate();
  std::vector<Tid> tids;
  std::vector<TokenMultiset> docs;
  tids.reserve(records.size());
  docs.reserve(records.size());
  for (const auto& r : records) {
    tids.push_back(r.tid);
    docs.push_back(qgram_tokenize(r.text, cfg));
  }
  return corpus_from_tokens(std::move(tids), docs);
}

void recompute_stats(Corpus& corpus) {
  const auto& table = corpus.table;
  const std::size_t docs = table.num_docs();
  auto& stats = corpus.stats;
  stats.tokens.assign(table.vocab.size(), TokenStats{});
  corpus.tuples.dl.assign(docs, 0);
  stats.total_tokens = 0;

  for (std::size_t d = 0; d < docs; ++d) {
    const auto [begin, end] = table.row_range(d);
    std::uint32_t dl = 0;
    for (auto r = begin; r < end; ++r) {
      auto& ts = stats.tokens[table.token[r]];
      ts.df += 1;
      ts.cf += table.tf[r];
      dl += table.tf[r];
    }
    corpus.tuples.dl[d] = dl;
    stats.total_tokens += dl;
  }

  const double n = static_cast<double>(stats.num_tuples);
  stats.avgdl = stats.num_tuples == 0 ? 0.0 : static_cast<double>(stats.total_tokens) / n;
  for (auto& ts : stats.tokens) {
    const double df = ts.df;
    ts.idf = std::log(n) - std::log(df);
    ts.rs = std::log((n - df + 0.5) / (df + 0.5));
  }
}

std::string_view weight_scheme_name(WeightScheme s) noexcept {
  switch (s) {
    case WeightScheme::cosine: return "cosine";
    case WeightScheme::bm25: return "bm25";
    case WeightScheme::rs: return "rs";
    case WeightScheme::idf: return "idf";
    case WeightScheme::hmm: return "hmm";
  }
  return "unknown";
}

WeightTable compute_cosine_weights(const Corpus& corpus) {
  const auto& table = corpus.table;
  WeightTable out{WeightScheme::cosine, std::vector<double>(table.num_rows(), 0.0)};
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    double norm2 = 0.0;
    for (auto r = begin; r < end; ++r) {
      const double w = table.tf[r] * corpus.stats.tokens[table.token[r]].idf;
      out.weight[r] = w;
      norm2 += w * w;
    }
    // Tuples whose tokens all have idf 0 keep zero weights.
    if (norm2 > 0.0) {
      const double norm = std::sqrt(norm2);
      for (auto r = begin; r < end; ++r) {
        out.weight[r] /= norm;
      }
    }
  }
  return out;
}

WeightTable compute_bm25_weights(const Corpus& corpus, double k1, double b) {
  if (!(k1 > 0.0) || !(b >= 0.0 && b <= 1.0)) {
    fail("invalid_argument", "bm25 requires k1 > 0 and 0 <= b <= 1");
  }
  const auto& table = corpus.table;
  const double avgdl = corpus.stats.avgdl;
  WeightTable out{WeightScheme::bm25, std::vector<double>(table.num_rows(), 0.0)};
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    const double dl = corpus.tuples.dl[d];
    const double big_k = k1 * ((1.0 - b) + b * dl / avgdl);
    for (auto r = begin; r < end; ++r) {
      const double tf = table.tf[r];
      out.weight[r] = corpus.stats.tokens[table.token[r]].rs * (k1 + 1.0) * tf / (big_k + tf);
    }
  }
  return out;
}

WeightTable compute_hmm_weights(const Corpus& corpus, double a0) {
  if (!(a0 > 0.0 && a0 < 1.0)) {
    fail("invalid_argument", "hmm requires 0 < a0 < 1");
  }
  const double a1 = 1.0 - a0;
  const auto& table = corpus.table;
  const double cs = static_cast<double>(corpus.stats.total_tokens);
  WeightTable out{WeightScheme::hmm, std::vector<double>(table.num_rows(), 0.0)};
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    const double dl = corpus.tuples.dl[d];
    for (auto r = begin; r < end; ++r) {
      const double pml = table.tf[r] / dl;
      const double ptge = static_cast<double>(corpus.stats.tokens[table.token[r]].cf) / cs;
      out.weight[r] = 1.0 + (a1 * pml) / (a0 * ptge);
    }
  }
  return out;
}

LMModel compute_lm_model(const Corpus& corpus) {
  const auto& table = corpus.table;
  const std::size_t vocab = table.vocab.size();
  const double cs = static_cast<double>(corpus.stats.total_tokens);

  LMModel model;
  model.cfcs.resize(vocab);
  for (std::size_t t = 0; t < vocab; ++t) {
    model.cfcs[t] = static_cast<double>(corpus.stats.tokens[t].cf) / cs;
  }

  // Mean maximum-likelihood estimate over the tuples containing the token.
  std::vector<double> pavg(vocab, 0.0);
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    const double dl = corpus.tuples.dl[d];
    for (auto r = begin; r < end; ++r) {
      pavg[table.token[r]] += table.tf[r] / dl;
    }
  }
  for (std::size_t t = 0; t < vocab; ++t) {
    pavg[t] /= corpus.stats.tokens[t].df;
  }

  model.pm.resize(table.num_rows());
  model.sumcompm.assign(table.num_docs(), 0.0);
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    const double dl = corpus.tuples.dl[d];
    double sum = 0.0;
    for (auto r = begin; r < end; ++r) {
      const double tf = table.tf[r];
      const double pml = tf / dl;
      const double avg = pavg[table.token[r]];
      const double freq = avg * dl;
      const double risk = (1.0 / (1.0 + freq)) * std::pow(freq / (1.0 + freq), tf);
      const double pm = std::pow(pml, 1.0 - risk) * std::pow(avg, risk);
      model.pm[r] = std::clamp(pm, lm_epsilon, 1.0 - lm_epsilon);
      sum += std::log(1.0 - model.pm[r]);
    }
    model.sumcompm[d] = sum;
  }
  return model;
}

PruneResult prune_by_idf(const Corpus& corpus, PruningPolicy policy) {
  if (!(policy.rate >= 0.0 && policy.rate <= 1.0)) {
    fail("invalid_argument", "prune rate must be in [0, 1]");
  }
  PruneResult result;
  const auto& tokens = corpus.stats.tokens;
  if (tokens.empty()) {
    result.corpus = corpus;
    return result;
  }
  double lo = tokens.front().idf;
  double hi = lo;
  for (const auto& ts : tokens) {
    lo = std::min(lo, ts.idf);
    hi = std::max(hi, ts.idf);
  }
  result.threshold = policy.rate >= 1.0 ? hi : std::min(hi, lo + policy.rate * (hi - lo));

  std::vector<bool> keep(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    keep[t] = tokens[t].idf >= result.threshold;
    if (!keep[t]) {
      result.dropped_tokens.push_back(corpus.table.vocab.str(static_cast<TokenId>(t)));
      result.dropped_occurrences += tokens[t].cf;
    }
  }
  std::sort(result.dropped_tokens.begin(), result.dropped_tokens.end());

  // Rebuild through the multiset path so ids are reassigned densely.
  const auto& table = corpus.table;
  std::vector<TokenMultiset> docs(table.num_docs());
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    for (auto r = begin; r < end; ++r) {
      if (keep[table.token[r]]) {
        docs[d].entries.push_back({table.vocab.str(table.token[r]), table.tf[r]});
      }
    }
    std::sort(docs[d].entries.begin(), docs[d].entries.end());
  }
  result.corpus = corpus_from_tokens(corpus.tids, docs);
  return result;
}

InvertedIndex InvertedIndex::build(const TokenTable& table) {
  InvertedIndex inv;
  const std::size_t vocab = table.vocab.size();
  inv.offsets.assign(vocab + 1, 0);
  for (auto t : table.token) {
    ++inv.offsets[t + 1];
  }
  std::partial_sum(inv.offsets.begin(), inv.offsets.end(), inv.offsets.begin());
  inv.doc.resize(table.num_rows());
  inv.row.resize(table.num_rows());
  std::vector<std::uint64_t> cursor(inv.offsets.begin(), inv.offsets.end() - 1);
  for (std::size_t d = 0; d < table.num_docs(); ++d) {
    const auto [begin, end] = table.row_range(d);
    for (auto r = begin; r < end; ++r) {
      const auto slot = cursor[table.token[r]]++;
      inv.doc[slot] = static_cast<std::uint32_t>(d);
      inv.row[slot] = r;
    }
  }
  return inv;
}

}  // namespace approxsel
