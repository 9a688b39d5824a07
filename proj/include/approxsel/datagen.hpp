#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "approxsel/rng.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

enum class Distribution { uniform, zipf, poisson };

std::string_view distribution_name(Distribution d) noexcept;
Distribution parse_distribution(std::string_view name);

/// Bidirectional word replacement table (e.g. "Inc." <-> "Incorporated").
/// Lookups ignore ASCII case.
class AbbreviationDictionary {
 public:
  AbbreviationDictionary() = default;
  explicit AbbreviationDictionary(std::vector<std::pair<std::string, std::string>> pairs);

  static AbbreviationDictionary builtin();

  std::optional<std::string> counterpart(std::string_view word) const;
  const std::vector<std::pair<std::string, std::string>>& pairs() const noexcept { return pairs_; }
  bool empty() const noexcept { return pairs_.empty(); }

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

struct GeneratorConfig {
  std::size_t target_size = 5000;
  std::size_t num_clean = 500;
  Distribution distribution = Distribution::uniform;
  double zipf_s = 1.0;
  double poisson_lambda = 0.0;  // 0 means target_size / num_clean
  double pct_erroneous = 90.0;
  double extent = 30.0;
  // Each erroneous tuple draws its edit count uniformly from
  // 1..round(extent/100 * length) unless set, in which case every one gets
  // exactly `extent` percent.
  bool exact_extent = false;
  double pct_token_swap = 20.0;
  double pct_abbreviation = 50.0;
  bool arbitrary_swap = false;
  AbbreviationDictionary dictionary = AbbreviationDictionary::builtin();
  std::uint64_t seed = 1;

  void validate() const;
};

struct Provenance {
  Tid tid = 0;
  std::int64_t cluster_id = 0;
  std::size_t source = 0;  // index into the clean pool
  bool clean = false;      // the source tuple itself
  bool marked = false;     // selected as an erroneous duplicate
  std::vector<std::string> errors;  // empty when every draw left the text intact
};

struct GeneratedDataset {
  std::vector<Record> records;
  std::vector<Provenance> provenance;
};

// Cluster sizes (each >= 1) summing to target_size, one per clean source.
std::vector<std::size_t> allocate_cluster_sizes(const GeneratorConfig& cfg);

// Largest-remainder apportionment of `total` over `weights`, every share >= 1.
std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total);

GeneratedDataset generate(std::span<const std::string> clean, const GeneratorConfig& cfg);

// Applies one random insert, delete, replace or swap at each of
// round(extent_pct / 100 * |s|) distinct code-point positions. Inserted and
// replacement characters are drawn from the string's own characters.
std::string inject_edit_errors(std::string_view s, double extent_pct, CounterRng& rng,
                               std::vector<std::string>* log = nullptr);

// Swaps pct / 100 * (words - 1) word pairs (adjacent unless `arbitrary`); a
// fractional count is rounded up with probability equal to its fraction.
std::string inject_token_swap(std::string_view s, double pct, CounterRng& rng,
                              bool arbitrary = false, std::vector<std::string>* log = nullptr);

// Replaces one dictionary word, chosen uniformly among the matches.
std::string inject_abbreviation(std::string_view s, const AbbreviationDictionary& dict,
                                CounterRng& rng, std::vector<std::string>* log = nullptr);

// Deterministic pool of distinct synthetic company names.
std::vector<std::string> company_names(std::size_t count, std::uint64_t seed = 2139);

// Provenance as JSON lines.
std::string format_provenance(std::span<const Provenance> log);

}  // namespace approxsel
