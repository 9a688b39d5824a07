#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace approxsel {

using Tid = std::int64_t;
using TokenId = std::uint32_t;

struct Record {
  Tid tid = 0;
  std::string text;
  std::optional<std::int64_t> cluster_id;

  bool operator==(const Record&) const = default;
};

struct ScoredTid {
  Tid tid = 0;
  double score = 0.0;

  bool operator==(const ScoredTid&) const = default;
};

// Scores in descending order, equal scores by ascending tid. Scores that agree
// to about 12 significant digits count as equal.
struct RankedResult {
  std::vector<ScoredTid> rows;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  bool operator==(const RankedResult&) const = default;
};

// Sorts rows into ranking order in place.
void sort_ranking(std::vector<ScoredTid>& rows);

enum class Predicate {
  intersect,
  jaccard,
  weighted_match,
  weighted_jaccard,
  cosine,
  bm25,
  lm,
  hmm,
  edit,
  ges,
  ges_jaccard,
  ges_apx,
  soft_tfidf,
};

std::span<const Predicate> all_predicates() noexcept;
std::string_view predicate_name(Predicate p) noexcept;
std::optional<Predicate> parse_predicate(std::string_view name) noexcept;
// Parses a comma-separated list; "all" expands to every predicate.
std::vector<Predicate> parse_predicate_list(std::string_view list);
std::string predicate_names_joined();

}  // namespace approxsel
