#include "approxsel/tokenizer.hpp"

#include <algorithm>
#include <cctype>

#include "approxsel/error.hpp"

namespace approxsel {

void TokenizerConfig::validate() const {
  if (q < 1) {
    fail("invalid_argument", "q must be >= 1, got " + std::to_string(q));
  }
  if (padded && is_space(pad)) {
    fail("invalid_argument", "pad symbol must not be whitespace");
  }
}

std::size_t TokenMultiset::total() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries) {
    n += e.count;
  }
  return n;
}

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

TokenMultiset count_tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  TokenMultiset out;
  for (auto& t : tokens) {
    if (!out.entries.empty() && out.entries.back().token == t) {
      ++out.entries.back().count;
    } else {
      out.entries.push_back({std::move(t), 1});
    }
  }
  return out;
}

namespace {

std::string normalize(std::string_view s, bool case_fold) {
  return case_fold ? fold_case(s) : std::string(s);
}

// Pads both ends and turns whitespace runs into q-1 pad symbols.
std::string pad_string(std::string_view s, const TokenizerConfig& cfg) {
  const std::string pads(static_cast<std::size_t>(cfg.q - 1), cfg.pad);
  std::string out = pads;
  bool in_space = false;
  for (char c : s) {
    if (is_space(c)) {
      if (!in_space) {
        out += pads;
      }
      in_space = true;
    } else {
      out += c;
      in_space = false;
    }
  }
  out += pads;
  return out;
}

void slide(std::string_view s, std::size_t q, std::vector<std::string>& out) {
  if (s.size() < q) {
    return;
  }
  for (std::size_t i = 0; i + q <= s.size(); ++i) {
    out.emplace_back(s.substr(i, q));
  }
}

}  // namespace

std::vector<std::string> qgram_sequence(std::string_view s, const TokenizerConfig& cfg) {
  cfg.validate();
  std::vector<std::string> grams;
  if (s.empty()) {
    return grams;
  }
  const std::string norm = normalize(s, cfg.case_fold);
  const std::string text = cfg.padded ? pad_string(norm, cfg) : norm;
  slide(text, static_cast<std::size_t>(cfg.q), grams);
  return grams;
}

TokenMultiset qgram_tokenize(std::string_view s, const TokenizerConfig& cfg) {
  return count_tokens(qgram_sequence(s, cfg));
}

std::vector<std::string> word_tokenize(std::string_view s, bool case_fold) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) {
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) {
      ++j;
    }
    if (j > i) {
      words.push_back(normalize(s.substr(i, j - i), case_fold));
    }
    i = j;
  }
  return words;
}

std::vector<std::string> word_qgram_set(std::string_view word, const TokenizerConfig& cfg) {
  cfg.validate();
  std::vector<std::string> grams;
  if (cfg.padded) {
    const std::string pads(static_cast<std::size_t>(cfg.q - 1), cfg.pad);
    slide(pads + std::string(word) + pads, static_cast<std::size_t>(cfg.q), grams);
  } else {
    slide(word, static_cast<std::size_t>(cfg.q), grams);
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

std::vector<WordQgram> word_qgrams(std::string_view s, const TokenizerConfig& cfg) {
  std::vector<WordQgram> pairs;
  for (const auto& w : word_tokenize(s, cfg.case_fold)) {
    for (auto& g : word_qgram_set(w, cfg)) {
      pairs.push_back({w, std::move(g)});
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

bool has_pad_collision(std::string_view s, const TokenizerConfig& cfg) noexcept {
  return cfg.padded && cfg.q > 1 && s.find(cfg.pad) != std::string_view::npos;
}

}  // namespace approxsel
