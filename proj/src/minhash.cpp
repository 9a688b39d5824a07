#include "approxsel/minhash.hpp"

#include <algorithm>

#include "approxsel/error.hpp"
#include "approxsel/rng.hpp"

namespace approxsel {

std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MinHasher::MinHasher(int num_hashes, std::uint64_t seed) : seed_(seed) {
  if (num_hashes < 1) {
    fail("invalid_argument", "min-hash needs at least one hash function");
  }
  // SplitMix64 stream; mix64 adds the increment itself.
  std::uint64_t state = seed;
  auto next = [&state] {
    const auto z = mix64(state);
    state += 0x9e3779b97f4a7c15ULL;
    return z;
  };
  for (int i = 0; i < num_hashes; ++i) {
    mult_.push_back(next() | 1ULL);
    add_.push_back(next());
  }
}

std::uint64_t MinHasher::hash(int fid, std::string_view gram) const noexcept {
  const auto x = fnv1a64(gram);
  const auto i = static_cast<std::size_t>(fid);
  return (mult_[i] * x + add_[i]) >> 32;
}

std::vector<std::uint64_t> MinHasher::signature(std::span<const std::string> grams) const {
  std::vector<std::uint64_t> sig(mult_.size(), empty_value);
  for (const auto& g : grams) {
    const auto x = fnv1a64(g);
    for (std::size_t i = 0; i < sig.size(); ++i) {
      sig[i] = std::min(sig[i], (mult_[i] * x + add_[i]) >> 32);
    }
  }
  return sig;
}

double sim_mh(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.size() != b.size() || a.empty()) {
    fail("invalid_argument", "min-hash signatures must have equal, nonzero length");
  }
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
  }
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

}  // namespace approxsel
