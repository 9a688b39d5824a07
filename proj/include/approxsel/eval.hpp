#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "approxsel/index.hpp"
#include "approxsel/predicates.hpp"
#include "approxsel/types.hpp"

namespace approxsel {

// Sum of precision at each relevant rank, over |relevant|. Relevant tids that
// the ranking misses contribute nothing.
double average_precision(const RankedResult& ranked, const std::unordered_set<Tid>& relevant);

// Best 2PR/(P+R) over all rank cutoffs; 0 for an empty ranking.
double max_f1(const RankedResult& ranked, const std::unordered_set<Tid>& relevant);

struct BenchmarkOptions {
  std::size_t n_queries = 500;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  QueryParams params;
  // Cluster labels by tid; empty means the indexed records' own cluster ids.
  std::span<const Record> labels;
};

struct PredicateReport {
  Predicate predicate = Predicate::intersect;
  double map = 0.0;
  double mean_max_f1 = 0.0;
  std::vector<double> ap;      // per query, in query order
  std::vector<double> max_f1;  // per query, in query order
  double preprocess_seconds = 0.0;
  double mean_query_seconds = 0.0;
  double p95_query_seconds = 0.0;
};

struct EvalReport {
  std::size_t requested_queries = 0;
  bool clipped = false;  // fewer tuples than requested queries
  std::uint64_t seed = 0;
  std::vector<Tid> queries;
  std::vector<PredicateReport> predicates;

  const PredicateReport& at(Predicate p) const;
  std::string to_json() const;
  std::string to_table() const;
  std::string to_csv() const;
};

// Samples queries from the indexed relation (every record needs a cluster id)
// and runs each predicate un-thresholded. Results do not depend on `jobs`.
EvalReport run_benchmark(const Index& index, std::span<const Predicate> predicates,
                         const BenchmarkOptions& options = {});

// Build time attributed to a predicate: shared tokenization plus its own tables.
double preprocess_seconds(const Index& index, Predicate p);

}  // namespace approxsel
