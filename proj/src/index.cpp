#include "approxsel/index.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include "approxsel/error.hpp"
#include "approxsel/minhash.hpp"

namespace approxsel {

namespace {

constexpr std::array kPredicates{
    Predicate::intersect, Predicate::jaccard, Predicate::weighted_match,
    Predicate::weighted_jaccard, Predicate::cosine, Predicate::bm25,
    Predicate::lm, Predicate::hmm, Predicate::edit,
    Predicate::ges, Predicate::ges_jaccard, Predicate::ges_apx,
    Predicate::soft_tfidf,
};

bool uses_words(Predicate p) {
  return p == Predicate::ges || p == Predicate::ges_jaccard || p == Predicate::ges_apx ||
         p == Predicate::soft_tfidf;
}

bool wants(const IndexConfig& cfg, Predicate p) {
  return std::find(cfg.predicates.begin(), cfg.predicates.end(), p) != cfg.predicates.end();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

namespace {

// Score rounded to 40 mantissa bits. Algebraically equal scores reached by
// different summation orders then compare equal and fall back to tid order.
double tie_key(double s) {
  if (s == 0.0 || !std::isfinite(s)) {
    return s;
  }
  int e = 0;
  const double m = std::frexp(s, &e);
  return std::ldexp(std::round(std::ldexp(m, 40)), e - 40);
}

}  // namespace

void sort_ranking(std::vector<ScoredTid>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ScoredTid& a, const ScoredTid& b) {
    const double ka = tie_key(a.score), kb = tie_key(b.score);
    if (ka != kb) {
      return ka > kb;
    }
    return a.tid < b.tid;
  });
}

std::span<const Predicate> all_predicates() noexcept { return kPredicates; }

std::string_view predicate_name(Predicate p) noexcept {
  switch (p) {
    case Predicate::intersect: return "intersect";
    case Predicate::jaccard: return "jaccard";
    case Predicate::weighted_match: return "weighted_match";
    case Predicate::weighted_jaccard: return "weighted_jaccard";
    case Predicate::cosine: return "cosine";
    case Predicate::bm25: return "bm25";
    case Predicate::lm: return "lm";
    case Predicate::hmm: return "hmm";
    case Predicate::edit: return "edit";
    case Predicate::ges: return "ges";
    case Predicate::ges_jaccard: return "ges_jaccard";
    case Predicate::ges_apx: return "ges_apx";
    case Predicate::soft_tfidf: return "soft_tfidf";
  }
  return "unknown";
}

std::optional<Predicate> parse_predicate(std::string_view name) noexcept {
  for (auto p : kPredicates) {
    if (predicate_name(p) == name) {
      return p;
    }
  }
  return std::nullopt;
}

std::string predicate_names_joined() {
  std::string out;
  for (auto p : kPredicates) {
    if (!out.empty()) {
      out += ",";
    }
    out += predicate_name(p);
  }
  return out;
}

std::vector<Predicate> parse_predicate_list(std::string_view list) {
  std::vector<Predicate> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    if (comma == std::string_view::npos) {
      comma = list.size();
    }
    const auto name = list.substr(pos, comma - pos);
    if (name == "all") {
      out.assign(kPredicates.begin(), kPredicates.end());
    } else if (!name.empty()) {
      const auto p = parse_predicate(name);
      if (!p) {
        fail("unknown_predicate",
             "unknown predicate '" + std::string(name) + "'; valid: " + predicate_names_joined());
      }
      if (std::find(out.begin(), out.end(), *p) == out.end()) {
        out.push_back(*p);
      }
    }
    pos = comma + 1;
  }
  if (out.empty()) {
    fail("invalid_argument", "empty predicate list");
  }
  return out;
}

void BuildParams::validate() const {
  if (!(k1 > 0.0)) fail("invalid_argument", "k1 must be > 0");
  if (!(b >= 0.0 && b <= 1.0)) fail("invalid_argument", "b must be in [0, 1]");
  if (!(a0 > 0.0 && a0 < 1.0)) fail("invalid_argument", "a0 must be in (0, 1)");
  if (minhash_size < 1) fail("invalid_argument", "min-hash size must be >= 1");
  if (!(prune_rate >= 0.0 && prune_rate <= 1.0)) {
    fail("invalid_argument", "prune rate must be in [0, 1]");
  }
}

std::string edit_normalize(std::string_view text, const TokenizerConfig& cfg) {
  return cfg.case_fold ? fold_case(text) : std::string(text);
}

std::vector<std::string> edit_qgrams(std::string_view text, const TokenizerConfig& cfg) {
  const auto q = static_cast<std::size_t>(cfg.q);
  const std::string pads(q - 1, cfg.pad);
  const std::string padded = pads + edit_normalize(text, cfg) + pads;
  std::vector<std::string> grams;
  for (std::size_t i = 0; i + q <= padded.size(); ++i) {
    grams.push_back(padded.substr(i, q));
  }
  return grams;
}

Index build_index(std::vector<Record> records, const IndexConfig& config) {
  config.tokenizer.validate();
  config.params.validate();
  if (config.predicates.empty()) {
    fail("invalid_argument", "no predicates requested");
  }

  IndexTables t;
  BuildInfo info;
  t.config = config;
  t.records = std::move(records);
  const auto& cfg = config.tokenizer;

  for (const auto& r : t.records) {
    info.pad_collisions += has_pad_collision(r.text, cfg);
  }

  {
    Stopwatch sw;
    Corpus full = build_corpus(t.records, cfg);
    if (config.params.prune_rate > 0.0) {
      auto pruned = prune_by_idf(full, {config.params.prune_rate});
      t.grams = std::move(pruned.corpus);
      t.prune_threshold = pruned.threshold;
      t.pruned_tokens = std::move(pruned.dropped_tokens);
    } else {
      t.grams = std::move(full);
    }
    const auto& table = t.grams.table;
    t.rs_sum.assign(table.num_docs(), 0.0);
    t.idf_sum.assign(table.num_docs(), 0.0);
    for (std::size_t d = 0; d < table.num_docs(); ++d) {
      const auto [begin, end] = table.row_range(d);
      for (auto r = begin; r < end; ++r) {
        t.rs_sum[d] += t.grams.stats.tokens[table.token[r]].rs;
        t.idf_sum[d] += t.grams.stats.tokens[table.token[r]].idf;
      }
    }
    info.seconds["tokens"] = sw.seconds();
  }

  if (wants(config, Predicate::cosine)) {
    Stopwatch sw;
    t.cosine = compute_cosine_weights(t.grams);
    info.seconds["cosine"] = sw.seconds();
  }
  if (wants(config, Predicate::bm25)) {
    Stopwatch sw;
    t.bm25 = compute_bm25_weights(t.grams, config.params.k1, config.params.b);
    info.seconds["bm25"] = sw.seconds();
  }
  if (wants(config, Predicate::hmm)) {
    Stopwatch sw;
    t.hmm = compute_hmm_weights(t.grams, config.params.a0);
    info.seconds["hmm"] = sw.seconds();
  }
  if (wants(config, Predicate::lm)) {
    Stopwatch sw;
    t.lm = compute_lm_model(t.grams);
    info.seconds["lm"] = sw.seconds();
  }
  if (wants(config, Predicate::edit)) {
    Stopwatch sw;
    EditTables edit;
    std::vector<TokenMultiset> docs;
    docs.reserve(t.records.size());
    for (const auto& r : t.records) {
      docs.push_back(count_tokens(edit_qgrams(r.text, cfg)));
      edit.length.push_back(static_cast<std::uint32_t>(r.text.size()));
    }
    edit.grams = corpus_from_tokens(t.grams.tids, docs).table;
    t.edit = std::move(edit);
    info.seconds["edit"] = sw.seconds();
  }
  const bool need_words = std::any_of(config.predicates.begin(), config.predicates.end(), uses_words);
  if (need_words) {
    Stopwatch sw;
    WordTables words;
    std::vector<TokenMultiset> docs;
    docs.reserve(t.records.size());
    for (const auto& r : t.records) {
      docs.push_back(count_tokens(word_tokenize(r.text, cfg.case_fold)));
    }
    words.corpus = corpus_from_tokens(t.grams.tids, docs);
    double sum = 0.0;
    for (const auto& ts : words.corpus.stats.tokens) {
      sum += ts.idf;
    }
    const auto vocab = words.corpus.table.vocab.size();
    words.avg_idf = vocab == 0 ? 0.0 : sum / static_cast<double>(vocab);
    words.cosine = compute_cosine_weights(words.corpus);

    std::vector<TokenMultiset> grams(vocab);
    for (std::size_t w = 0; w < vocab; ++w) {
      for (auto& g : word_qgram_set(words.corpus.table.vocab.str(static_cast<TokenId>(w)), cfg)) {
        grams[w].entries.push_back({std::move(g), 1});
      }
    }
    std::vector<Tid> word_ids(vocab);
    for (std::size_t w = 0; w < vocab; ++w) {
      word_ids[w] = static_cast<Tid>(w);
    }
    words.qgrams = corpus_from_tokens(std::move(word_ids), grams).table;
    info.seconds["words"] = sw.seconds();

    if (wants(config, Predicate::ges_apx)) {
      Stopwatch msw;
      const MinHasher hasher(config.params.minhash_size, config.params.minhash_seed);
      MinHashTables mh;
      mh.size = config.params.minhash_size;
      mh.seed = config.params.minhash_seed;
      mh.signatures.reserve(vocab * static_cast<std::size_t>(mh.size));
      std::vector<std::string> wg;
      for (std::size_t w = 0; w < vocab; ++w) {
        wg.clear();
        const auto [begin, end] = words.qgrams.row_range(w);
        for (auto r = begin; r < end; ++r) {
          wg.push_back(words.qgrams.vocab.str(words.qgrams.token[r]));
        }
        const auto sig = hasher.signature(wg);
        mh.signatures.insert(mh.signatures.end(), sig.begin(), sig.end());
      }
      t.minhash = std::move(mh);
      info.seconds["minhash"] = msw.seconds();
    }
    t.words = std::move(words);
  }

  return Index(std::move(t), std::move(info));
}

Index::Index(IndexTables tables, BuildInfo info) : t_(std::move(tables)), info_(std::move(info)) {
  grams_inv_ = InvertedIndex::build(t_.grams.table);
  if (t_.edit) {
    edit_inv_ = InvertedIndex::build(t_.edit->grams);
  }
  if (t_.words) {
    words_inv_ = InvertedIndex::build(t_.words->corpus.table);
    word_qgram_inv_ = InvertedIndex::build(t_.words->qgrams);
  }
  if (t_.minhash && t_.words) {
    const auto& mh = *t_.minhash;
    minhash_lookup_.resize(static_cast<std::size_t>(mh.size));
    const auto vocab = t_.words->corpus.table.vocab.size();
    for (std::size_t w = 0; w < vocab; ++w) {
      const auto sig = mh.signature(static_cast<TokenId>(w));
      for (std::size_t f = 0; f < sig.size(); ++f) {
        if (sig[f] != MinHasher::empty_value) {
          minhash_lookup_[f][sig[f]].push_back(static_cast<TokenId>(w));
        }
      }
    }
  }
  pruned_.insert(t_.pruned_tokens.begin(), t_.pruned_tokens.end());
  doc_of_.reserve(t_.records.size());
  for (std::size_t d = 0; d < t_.records.size(); ++d) {
    doc_of_.emplace(t_.records[d].tid, d);
  }
}

bool Index::supports(Predicate p) const noexcept {
  switch (p) {
    case Predicate::intersect:
    case Predicate::jaccard:
    case Predicate::weighted_match:
    case Predicate::weighted_jaccard:
      return true;
    case Predicate::cosine: return t_.cosine.has_value();
    case Predicate::bm25: return t_.bm25.has_value();
    case Predicate::lm: return t_.lm.has_value();
    case Predicate::hmm: return t_.hmm.has_value();
    case Predicate::edit: return t_.edit.has_value();
    case Predicate::ges:
    case Predicate::ges_jaccard:
    case Predicate::soft_tfidf:
      return t_.words.has_value();
    case Predicate::ges_apx: return t_.words.has_value() && t_.minhash.has_value();
  }
  return false;
}

void Index::require(Predicate p) const {
  if (!supports(p)) {
    fail("missing_table", "index was built without the tables for predicate '" +
                              std::string(predicate_name(p)) + "'");
  }
}

std::optional<std::size_t> Index::doc_of(Tid tid) const {
  if (auto it = doc_of_.find(tid); it != doc_of_.end()) {
    return it->second;
  }
  return std::nullopt;
}

bool Index::is_pruned(std::string_view token) const { return pruned_.find(token) != pruned_.end(); }

}  // namespace approxsel
