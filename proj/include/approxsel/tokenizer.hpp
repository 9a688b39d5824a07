#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace approxsel {

struct TokenizerConfig {
  int q = 2;
  // Replace whitespace runs by q-1 pad symbols and pad both ends.
  bool padded = true;
  // ASCII uppercase normalization.
  bool case_fold = true;
  char pad = '$';

  void validate() const;
  bool operator==(const TokenizerConfig&) const = default;
};

struct TokenCount {
  std::string token;
  std::uint32_t count = 0;

  auto operator<=>(const TokenCount&) const = default;
};

// Distinct tokens with their multiplicities, sorted by token.
struct TokenMultiset {
  std::vector<TokenCount> entries;

  std::size_t total() const noexcept;
  bool empty() const noexcept { return entries.empty(); }
  bool operator==(const TokenMultiset&) const = default;
};

struct WordQgram {
  std::string word;
  std::string qgram;

  auto operator<=>(const WordQgram&) const = default;
};

bool is_space(char c) noexcept;
std::string fold_case(std::string_view s);

// Collapses the token list into a sorted multiset.
TokenMultiset count_tokens(std::vector<std::string> tokens);

// Grams in window order (duplicates kept).
std::vector<std::string> qgram_sequence(std::string_view s, const TokenizerConfig& cfg);
TokenMultiset qgram_tokenize(std::string_view s, const TokenizerConfig& cfg);

std::vector<std::string> word_tokenize(std::string_view s, bool case_fold = true);

// Distinct q-grams of a single word, sorted. Padding (if enabled) is applied
// around the word; the word is expected to be already case-folded.
std::vector<std::string> word_qgram_set(std::string_view word, const TokenizerConfig& cfg);

// Distinct (word, q-gram) pairs, sorted.
std::vector<WordQgram> word_qgrams(std::string_view s, const TokenizerConfig& cfg);

// True when padding is on and s already contains the pad symbol, which makes
// boundary grams indistinguishable from content grams.
bool has_pad_collision(std::string_view s, const TokenizerConfig& cfg) noexcept;

}  // namespace approxsel
