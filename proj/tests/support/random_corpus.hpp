#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "approxsel/types.hpp"

namespace testing_support {

// Short strings over a small alphabet, with near-duplicates so that rankings
// have structure and ties.
class RandomCorpus {
 public:
  explicit RandomCorpus(std::uint64_t seed, std::string alphabet = "abcdefgh")
      : rng_(seed), alphabet_(std::move(alphabet)) {}

  std::string word(int min_len = 1, int max_len = 5) {
    std::string w;
    const int len = pick(min_len, max_len);
    for (int i = 0; i < len; ++i) {
      w += alphabet_[static_cast<std::size_t>(pick(0, static_cast<int>(alphabet_.size()) - 1))];
    }
    return w;
  }

  std::string text(int max_words = 4) {
    std::string s;
    const int n = pick(1, max_words);
    for (int i = 0; i < n; ++i) {
      if (i) s += ' ';
      s += word();
    }
    return s;
  }

  // One random character edit.
  std::string mutate(std::string s) {
    const int op = pick(0, 2);
    if (s.empty() || op == 0) {
      s.insert(s.begin() + pick(0, static_cast<int>(s.size())),
               alphabet_[static_cast<std::size_t>(pick(0, static_cast<int>(alphabet_.size()) - 1))]);
    } else if (op == 1) {
      s.erase(s.begin() + pick(0, static_cast<int>(s.size()) - 1));
    } else {
      s[static_cast<std::size_t>(pick(0, static_cast<int>(s.size()) - 1))] =
          alphabet_[static_cast<std::size_t>(pick(0, static_cast<int>(alphabet_.size()) - 1))];
    }
    return s;
  }

  std::vector<approxsel::Record> records(int n) {
    std::vector<approxsel::Record> out;
    for (int i = 0; i < n; ++i) {
      std::string s;
      if (i > 0 && pick(0, 2) == 0) {
        s = out[static_cast<std::size_t>(pick(0, i - 1))].text;
        for (int k = pick(0, 2); k > 0; --k) s = mutate(s);
      } else {
        s = text();
      }
      // Sparse, shuffled tids catch doc-index/tid mix-ups.
      out.push_back({static_cast<approxsel::Tid>(3 * i + 7), s, std::nullopt});
    }
    return out;
  }

  // Either a mutated tuple or fresh text.
  std::string query(const std::vector<approxsel::Record>& recs) {
    if (!recs.empty() && pick(0, 3) != 0) {
      auto s = recs[static_cast<std::size_t>(pick(0, static_cast<int>(recs.size()) - 1))].text;
      for (int k = pick(0, 2); k > 0; --k) s = mutate(s);
      return s;
    }
    return text();
  }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::string alphabet_;
};

}  // namespace testing_support
