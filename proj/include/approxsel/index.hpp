#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "approxsel/corpus.hpp"
#include "approxsel/tokenizer.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

// Parameters baked into the persisted tables.
struct BuildParams {
  double k1 = 1.5;
  double b = 0.675;
  double a0 = 0.2;
  int minhash_size = 5;
  std::uint64_t minhash_seed = 0x5eed;
  double prune_rate = 0.0;

  void validate() const;
  bool operator==(const BuildParams&) const = default;
};

struct IndexConfig {
  TokenizerConfig tokenizer;
  BuildParams params;
  std::vector<Predicate> predicates{all_predicates().begin(), all_predicates().end()};

  bool operator==(const IndexConfig&) const = default;
};

// Character q-grams for the edit-distance count filter: the case-normalized
// string padded with q-1 symbols at both ends only, so every tuple of length
// L has exactly L + q - 1 grams.
struct EditTables {
  TokenTable grams;
  std::vector<std::uint32_t> length;

  bool operator==(const EditTables&) const = default;
};

// Word-level tables shared by the combination predicates.
struct WordTables {
  Corpus corpus;             // word tokens with tf
  double avg_idf = 0.0;      // weight of words unseen in the relation
  WeightTable cosine;        // normalized word tf-idf
  TokenTable qgrams;         // one "doc" per vocabulary word: its distinct q-grams

  bool operator==(const WordTables&) const = default;
};

// Signatures per vocabulary word; a word's signature depends on the word only,
// so (tid, word) rows share it.
struct MinHashTables {
  int size = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> signatures;  // word-major, `size` per word

  std::span<const std::uint64_t> signature(TokenId word) const noexcept {
    return {signatures.data() + static_cast<std::size_t>(word) * size,
            static_cast<std::size_t>(size)};
  }
  bool operator==(const MinHashTables&) const = default;
};

// Everything persisted by save_index.
struct IndexTables {
  IndexConfig config;
  std::vector<Record> records;
  Corpus grams;
  double prune_threshold = 0.0;
  std::vector<std::string> pruned_tokens;
  std::vector<double> rs_sum;   // per doc: sum of RS weights over distinct tokens
  std::vector<double> idf_sum;  // per doc: sum of idf weights over distinct tokens
  std::optional<WeightTable> cosine;
  std::optional<WeightTable> bm25;
  std::optional<WeightTable> hmm;
  std::optional<LMModel> lm;
  std::optional<EditTables> edit;
  std::optional<WordTables> words;
  std::optional<MinHashTables> minhash;

  bool operator==(const IndexTables&) const = default;
};

struct BuildInfo {
  std::map<std::string, double> seconds;  // per artifact
  std::size_t pad_collisions = 0;
};

/// Immutable, query-ready index. Holds the persisted tables plus the derived
/// posting lists that are rebuilt on construction.
class Index {
 public:
  explicit Index(IndexTables tables, BuildInfo info = {});

  const IndexTables& tables() const noexcept { return t_; }
  const IndexConfig& config() const noexcept { return t_.config; }
  const BuildInfo& build_info() const noexcept { return info_; }
  std::size_t num_docs() const noexcept { return t_.records.size(); }

  bool supports(Predicate p) const noexcept;
  // Throws when the tables needed by p were not built.
  void require(Predicate p) const;

  std::optional<std::size_t> doc_of(Tid tid) const;
  bool is_pruned(std::string_view token) const;

  const InvertedIndex& gram_postings() const noexcept { return grams_inv_; }
  const InvertedIndex& edit_postings() const noexcept { return edit_inv_; }
  const InvertedIndex& word_postings() const noexcept { return words_inv_; }
  // q-gram id -> vocabulary words containing it.
  const InvertedIndex& word_qgram_postings() const noexcept { return word_qgram_inv_; }
  // Per hash function: signature value -> words.
  const std::vector<std::unordered_map<std::uint64_t, std::vector<TokenId>>>& minhash_lookup()
      const noexcept {
    return minhash_lookup_;
  }

 private:
  IndexTables t_;
  BuildInfo info_;
  InvertedIndex grams_inv_;
  InvertedIndex edit_inv_;
  InvertedIndex words_inv_;
  InvertedIndex word_qgram_inv_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<TokenId>>> minhash_lookup_;
  std::unordered_set<std::string, StringHash, std::equal_to<>> pruned_;
  std::unordered_map<Tid, std::size_t> doc_of_;
};

Index build_index(std::vector<Record> records, const IndexConfig& config);

std::vector<std::string> edit_qgrams(std::string_view text, const TokenizerConfig& cfg);
std::string edit_normalize(std::string_view text, const TokenizerConfig& cfg);

inline constexpr int index_format_version = 1;

// Writes into a temporary sibling directory and renames it into place.
// An existing directory is replaced only when overwrite is set.
void save_index(const Index& index, const std::filesystem::path& dir, bool overwrite = false);
Index load_index(const std::filesystem::path& dir);

}  // namespace approxsel
