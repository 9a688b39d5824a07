#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "approxsel/tokenizer.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Dense token ids in first-seen order.
class Vocabulary {
 public:
  TokenId intern(std::string_view token);
  std::optional<TokenId> find(std::string_view token) const;
  const std::string& str(TokenId id) const { return tokens_[id]; }
  std::size_t size() const noexcept { return tokens_.size(); }
  std::span<const std::string> tokens() const noexcept { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> ids_;
};

/// Relational (tid, token, tf) rows stored column-wise and grouped by tuple.
/// Rows of tuple `doc` occupy [offsets[doc], offsets[doc + 1]) and are sorted
/// by token id, so each (doc, token) pair appears once.
struct TokenTable {
  Vocabulary vocab;
  std::vector<std::uint64_t> offsets{0};
  std::vector<TokenId> token;
  std::vector<std::uint32_t> tf;

  std::size_t num_docs() const noexcept { return offsets.size() - 1; }
  std::size_t num_rows() const noexcept { return token.size(); }
  std::pair<std::size_t, std::size_t> row_range(std::size_t doc) const noexcept {
    return {offsets[doc], offsets[doc + 1]};
  }

  bool operator==(const TokenTable&) const = default;
};

struct TokenStats {
  std::uint32_t df = 0;  // tuples containing the token
  std::uint64_t cf = 0;  // total occurrences
  double idf = 0.0;      // log N - log df
  double rs = 0.0;       // log((N - df + 0.5) / (df + 0.5))

  bool operator==(const TokenStats&) const = default;
};

struct CorpusStats {
  std::uint64_t num_tuples = 0;   // N
  std::uint64_t total_tokens = 0; // cs
  double avgdl = 0.0;             // cs / N
  std::vector<TokenStats> tokens; // indexed by token id

  bool operator==(const CorpusStats&) const = default;
};

struct TupleStats {
  std::vector<std::uint32_t> dl;  // tokens per tuple, indexed by doc

  bool operator==(const TupleStats&) const = default;
};

// Tuples are addressed by dense doc index; tids[doc] maps back.
struct Corpus {
  std::vector<Tid> tids;
  TokenTable table;
  TupleStats tuples;
  CorpusStats stats;

  bool operator==(const Corpus&) const = default;
};

Corpus build_corpus(std::span<const Record> records, const TokenizerConfig& cfg);

// Builds from already tokenized tuples. Throws on duplicate tids.
Corpus corpus_from_tokens(std::vector<Tid> tids, std::span<const TokenMultiset> docs);

// Recomputes tuples/stats from the table; N is kept from num_tuples.
void recompute_stats(Corpus& corpus);

enum class WeightScheme : std::uint8_t { cosine, bm25, rs, idf, hmm };

std::string_view weight_scheme_name(WeightScheme s) noexcept;

// One weight per TokenTable row.
struct WeightTable {
  WeightScheme scheme = WeightScheme::cosine;
  std::vector<double> weight;

  bool operator==(const WeightTable&) const = default;
};

WeightTable compute_cosine_weights(const Corpus& corpus);
WeightTable compute_bm25_weights(const Corpus& corpus, double k1, double b);
WeightTable compute_hmm_weights(const Corpus& corpus, double a0);

// pm is clamped to [lm_epsilon, 1 - lm_epsilon].
inline constexpr double lm_epsilon = 1e-12;

struct LMModel {
  std::vector<double> pm;        // per row
  std::vector<double> cfcs;      // per token: cf / cs
  std::vector<double> sumcompm;  // per doc: sum of log(1 - pm) over its rows

  bool operator==(const LMModel&) const = default;
};

LMModel compute_lm_model(const Corpus& corpus);

struct PruningPolicy {
  double rate = 0.0;
};

struct PruneResult {
  Corpus corpus;
  double threshold = 0.0;
  std::vector<std::string> dropped_tokens;  // sorted
  std::uint64_t dropped_occurrences = 0;
};

// Drops tokens with idf < min(idf) + rate * (max(idf) - min(idf)) and rebuilds
// the vocabulary and statistics from the surviving rows.
PruneResult prune_by_idf(const Corpus& corpus, PruningPolicy policy);

/// Token -> (doc, row) postings derived from a TokenTable.
struct InvertedIndex {
  std::vector<std::uint64_t> offsets{0};
  std::vector<std::uint32_t> doc;
  std::vector<std::uint64_t> row;

  static InvertedIndex build(const TokenTable& table);

  std::pair<std::size_t, std::size_t> range(TokenId t) const noexcept {
    return {offsets[t], offsets[t + 1]};
  }
};

}  // namespace approxsel
