#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "approxsel/corpus.hpp"
#include "approxsel/index.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

// Query-time knobs. Build-time parameters (k1, b, a0, H) live in BuildParams.
struct QueryParams {
  double k3 = 8.0;
  WeightScheme overlap_scheme = WeightScheme::rs;  // rs or idf
  double edit_theta = 0.7;
  double ges_theta = 0.8;
  double c_ins = 0.5;
  double soft_theta = 0.8;

  void validate() const;
};

/// Query q-grams resolved against the base vocabulary. Pruned tokens are
/// removed entirely; tokens the relation never contained are only counted.
struct QueryTerms {
  std::vector<TokenId> ids;        // sorted, distinct, attested tokens
  std::vector<std::uint32_t> tf;   // query multiplicity of ids[i]
  std::size_t distinct = 0;        // |Q| over distinct surviving tokens
};

QueryTerms resolve_query(const Index& index, std::string_view query);

RankedResult score_intersect(const Index& index, std::string_view query);
RankedResult score_jaccard(const Index& index, std::string_view query);
RankedResult score_weighted_match(const Index& index, std::string_view query,
                                  WeightScheme scheme = WeightScheme::rs);
RankedResult score_weighted_jaccard(const Index& index, std::string_view query,
                                    WeightScheme scheme = WeightScheme::rs);
RankedResult score_cosine(const Index& index, std::string_view query);
RankedResult score_bm25(const Index& index, std::string_view query, double k3 = 8.0);
RankedResult score_lm(const Index& index, std::string_view query);
// Unsimplified product form; differs from score_lm by the query-only factor
// prod cf/cs. Exposed for audits and tests.
RankedResult score_lm_reference(const Index& index, std::string_view query);
RankedResult score_hmm(const Index& index, std::string_view query);

// Full un-thresholded ranking (edit and the GES filters keep their own theta).
RankedResult rank(const Index& index, Predicate predicate, std::string_view query,
                  const QueryParams& params = {});

struct SelectOptions {
  std::optional<std::size_t> top_k;
  std::optional<double> min_score;
};

RankedResult approximate_select(const Index& index, Predicate predicate, std::string_view query,
                                const QueryParams& params = {}, const SelectOptions& options = {});

}  // namespace approxsel
