#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace approxsel {

/// Family of H hash functions h_i(x) = (a_i * x + b_i) >> 32 over a 64-bit
/// FNV-1a digest x of the q-gram, with odd multipliers a_i and offsets b_i
/// drawn from a SplitMix64 stream seeded by `seed`.
class MinHasher {
 public:
  MinHasher(int num_hashes, std::uint64_t seed);

  int size() const noexcept { return static_cast<int>(mult_.size()); }
  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t hash(int fid, std::string_view gram) const noexcept;

  // Component-wise minimum over the grams. An empty set yields empty_value in
  // every component.
  std::vector<std::uint64_t> signature(std::span<const std::string> grams) const;

  static constexpr std::uint64_t empty_value = ~std::uint64_t{0};

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> mult_;
  std::vector<std::uint64_t> add_;
};

std::uint64_t fnv1a64(std::string_view s) noexcept;

// Fraction of agreeing components. Signatures must have equal length.
double sim_mh(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

}  // namespace approxsel
