#pragma once

// Brute-force reference formulas, written straight from the definitions and
// sharing no code with the library beyond the Record struct. Every call
// recomputes all statistics from the raw strings; meant for tiny corpora.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "approxsel/types.hpp"

namespace oracle {

struct Tok {
  int q = 2;
  bool padded = true;
  bool fold = true;
  char pad = '$';
};

// tid -> score, only for tuples the predicate returns.
using Scores = std::map<std::int64_t, double>;
using Docs = std::vector<approxsel::Record>;

std::string upper(const std::string& s);
std::vector<std::string> qgrams(const std::string& s, const Tok& tok);
std::vector<std::string> words(const std::string& s, bool fold = true);
std::set<std::string> word_grams(const std::string& word, const Tok& tok);

Scores intersect(const Docs& docs, const std::string& query, const Tok& tok);
Scores jaccard(const Docs& docs, const std::string& query, const Tok& tok);
// use_rs: RS weights, otherwise idf.
Scores weighted_match(const Docs& docs, const std::string& query, const Tok& tok, bool use_rs);
Scores weighted_jaccard(const Docs& docs, const std::string& query, const Tok& tok, bool use_rs);
Scores cosine(const Docs& docs, const std::string& query, const Tok& tok);
Scores bm25(const Docs& docs, const std::string& query, const Tok& tok, double k1, double b,
            double k3);
// Rewritten LM score, exponentiated.
Scores lm(const Docs& docs, const std::string& query, const Tok& tok);
// log of the un-rewritten product: query product times the complement product
// over the tuple's own tokens, constant factor kept.
Scores lm_full_log(const Docs& docs, const std::string& query, const Tok& tok);
// Rewritten HMM product.
Scores hmm(const Docs& docs, const std::string& query, const Tok& tok, double a0);
// log of prod over attested query occurrences of a0 P(q|GE) + a1 P(q|D).
Scores hmm_full_log(const Docs& docs, const std::string& query, const Tok& tok, double a0);

std::size_t levenshtein(const std::string& a, const std::string& b);
double edit_sim(const std::string& a, const std::string& b);
// Every tuple with edit similarity >= theta, by exhaustive comparison.
Scores edit_select(const Docs& docs, const std::string& query, double theta, bool fold = true);

double jaro_winkler(const std::string& a, const std::string& b);

double ges_exact(const Docs& docs, const std::string& query, const std::string& tuple,
                 double c_ins);
// Exact GES over tuples sharing a word q-gram with the query.
Scores ges(const Docs& docs, const std::string& query, const Tok& tok, double c_ins);
// Filter score of tuples with at least one word neighbour (before theta).
Scores ges_jaccard_filter(const Docs& docs, const std::string& query, const Tok& tok);
Scores ges_apx_filter(const Docs& docs, const std::string& query, const Tok& tok, int h,
                      std::uint64_t seed);
Scores soft_tfidf(const Docs& docs, const std::string& query, double theta);

std::vector<std::uint64_t> minhash_signature(const std::set<std::string>& grams, int h,
                                             std::uint64_t seed);
double set_jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

// Ranking: score descending, tid ascending.
std::vector<std::int64_t> order(const Scores& s);

double average_precision(const std::vector<std::int64_t>& ranked,
                         const std::set<std::int64_t>& relevant);
double max_f1(const std::vector<std::int64_t>& ranked, const std::set<std::int64_t>& relevant);

}  // namespace oracle
