#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "approxsel/index.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

// Unit-cost Levenshtein distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - lev / max(|a|, |b|); two empty strings are identical (1.0).
double edit_similarity(std::string_view a, std::string_view b);

double jaro(std::string_view a, std::string_view b);
// Prefix scale 0.1, common prefix capped at 4.
double jaro_winkler(std::string_view a, std::string_view b);

// |a ∩ b| / |a ∪ b| of two sorted, distinct sequences. Two empty sets give 0.
double set_jaccard(std::span<const std::string> a, std::span<const std::string> b);

using WordWeight = std::function<double(std::string_view)>;

// Minimum cost of turning the query word sequence into the tuple word
// sequence: replace (1 - sim_edit) * w(t1), insert c_ins * w(t), delete w(t).
double ges_transformation_cost(std::span<const std::string> query,
                               std::span<const std::string> tuple, const WordWeight& weight,
                               double c_ins);

// 1 - min(tc / wt(Q), 1); 0 when wt(Q) = 0.
double ges_exact(std::string_view query, std::string_view tuple, const WordWeight& weight,
                 double c_ins, bool case_fold = true);

// Per-word term of the GES filters: min(1, (2/q) * sim + 1 - 1/q).
double ges_word_term(double sim, int q);
// Same term before the cap.
double ges_word_term_uncapped(double sim, int q);

// Word idf from the index, or the average idf for words absent from it.
double word_weight(const Index& index, std::string_view word);

// Tuples that may satisfy sim_edit(query, D) >= theta, by the q-gram count
// filter. Returned tids are in index order. theta must lie in (0, 1].
std::vector<Tid> qgram_count_filter(const Index& index, std::string_view query, double theta);

// Candidates from the filter verified with the exact edit similarity; only
// tuples with similarity >= theta are kept.
RankedResult score_edit(const Index& index, std::string_view query, double theta);

// Exact GES over tuples sharing at least one word q-gram with the query.
RankedResult score_ges(const Index& index, std::string_view query, double c_ins);

// Word-level Jaccard filter; keeps tuples scoring >= theta.
RankedResult ges_jaccard_score(const Index& index, std::string_view query, double theta);

// As ges_jaccard_score with min-hash agreement in place of Jaccard.
RankedResult ges_apx_score(const Index& index, std::string_view query, double theta);

// Re-scores filter survivors with exact GES.
RankedResult verify_ges(const Index& index, std::string_view query, const RankedResult& candidates,
                        double c_ins);

// Jaro-Winkler SoftTFIDF; a query word joins CLOSE when some tuple word has
// similarity strictly above theta.
RankedResult soft_tfidf_score(const Index& index, std::string_view query, double theta);

}  // namespace approxsel
