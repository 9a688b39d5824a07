#include "approxsel/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "approxsel/error.hpp"
#include "approxsel/rng.hpp"

namespace approxsel {

double average_precision(const RankedResult& ranked, const std::unordered_set<Tid>& relevant) {
  if (relevant.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ranked.rows.size(); ++r) {
    if (relevant.count(ranked.rows[r].tid)) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

double max_f1(const RankedResult& ranked, const std::unordered_set<Tid>& relevant) {
  double best = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < ranked.rows.size(); ++r) {
    if (relevant.count(ranked.rows[r].tid)) {
      ++hits;
      // 2PR/(P+R) with P = hits/r and R = hits/|rel|.
      best = std::max(best, 2.0 * static_cast<double>(hits) /
                                static_cast<double>(r + 1 + relevant.size()));
    }
  }
  return best;
}

double preprocess_seconds(const Index& index, Predicate p) {
  const auto& s = index.build_info().seconds;
  const auto get = [&](const char* key) {
    const auto it = s.find(key);
    return it == s.end() ? 0.0 : it->second;
  };
  switch (p) {
    case Predicate::intersect:
    case Predicate::jaccard:
    case Predicate::weighted_match:
    case Predicate::weighted_jaccard:
      return get("tokens");
    case Predicate::cosine:
      return get("tokens") + get("cosine");
    case Predicate::bm25:
      return get("tokens") + get("bm25");
    case Predicate::lm:
      return get("tokens") + get("lm");
    case Predicate::hmm:
      return get("tokens") + get("hmm");
    case Predicate::edit:
      return get("edit");
    case Predicate::ges:
    case Predicate::ges_jaccard:
    case Predicate::soft_tfidf:
      return get("words");
    case Predicate::ges_apx:
      return get("words") + get("minhash");
  }
  return 0.0;
}

const PredicateReport& EvalReport::at(Predicate p) const {
  for (const auto& r : predicates) {
    if (r.predicate == p) {
      return r;
    }
  }
  fail("invalid_argument", "predicate " + std::string(predicate_name(p)) + " not in report");
}

EvalReport run_benchmark(const Index& index, std::span<const Predicate> predicates,
                         const BenchmarkOptions& options) {
  options.params.validate();
  for (const auto p : predicates) {
    index.require(p);
  }
  const auto& records = index.tables().records;
  const auto labels = options.labels.empty() ? std::span<const Record>(records) : options.labels;
  std::unordered_map<Tid, std::int64_t> cluster_of;
  std::unordered_map<std::int64_t, std::vector<Tid>> clusters;
  for (const auto& r : labels) {
    if (!r.cluster_id) {
      fail("invalid_argument", "tuple " + std::to_string(r.tid) + " has no cluster_id");
    }
    cluster_of[r.tid] = *r.cluster_id;
    clusters[*r.cluster_id].push_back(r.tid);
  }
  for (const auto& r : records) {
    if (!cluster_of.count(r.tid)) {
      fail("invalid_argument", "tuple " + std::to_string(r.tid) + " has no cluster label");
    }
  }

  EvalReport report;
  report.requested_queries = options.n_queries;
  report.seed = options.seed;
  const auto n = std::min(options.n_queries, records.size());
  report.clipped = n < options.n_queries;

  // Partial Fisher-Yates over record positions.
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(options.seed, 0x9e37);
  for (std::size_t i = 0; i < n; ++i) {
    std::swap(order[i], order[i + rng.below(order.size() - i)]);
  }
  std::vector<const Record*> queries(n);
  for (std::size_t i = 0; i < n; ++i) {
    queries[i] = &records[order[i]];
    report.queries.push_back(queries[i]->tid);
  }

  for (const auto p : predicates) {
    PredicateReport pr;
    pr.predicate = p;
    pr.preprocess_seconds = preprocess_seconds(index, p);
    pr.ap.assign(n, 0.0);
    pr.max_f1.assign(n, 0.0);
    std::vector<double> times(n, 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    const auto worker = [&] {
      try {
        for (auto i = next++; i < n; i = next++) {
          const auto& q = *queries[i];
          const auto& members = clusters.at(cluster_of.at(q.tid));
          const std::unordered_set<Tid> relevant(members.begin(), members.end());
          const auto start = std::chrono::steady_clock::now();
          const auto ranked = rank(index, p, q.text, options.params);
          times[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
          pr.ap[i] = average_precision(ranked, relevant);
          pr.max_f1[i] = max_f1(ranked, relevant);
        }
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) {
          error = std::current_exception();
        }
        next = n;
      }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(
                                                                            std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (unsigned j = 0; j < jobs; ++j) {
        pool.emplace_back(worker);
      }
    }
    if (error) {
      std::rethrow_exception(error);
    }

    if (n > 0) {
      pr.map = std::accumulate(pr.ap.begin(), pr.ap.end(), 0.0) / static_cast<double>(n);
      pr.mean_max_f1 =
          std::accumulate(pr.max_f1.begin(), pr.max_f1.end(), 0.0) / static_cast<double>(n);
      pr.mean_query_seconds =
          std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(n);
      std::sort(times.begin(), times.end());
      const auto rank95 = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
      pr.p95_query_seconds = times[std::max<std::size_t>(rank95, 1) - 1];
    }
    report.predicates.push_back(std::move(pr));
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["requested_queries"] = requested_queries;
  j["n_queries"] = queries.size();
  j["clipped"] = clipped;
  j["seed"] = seed;
  j["queries"] = queries;
  auto& rows = j["predicates"] = nlohmann::json::array();
  for (const auto& p : predicates) {
    rows.push_back({{"predicate", predicate_name(p.predicate)},
                    {"map", p.map},
                    {"mean_max_f1", p.mean_max_f1},
                    {"preprocess_seconds", p.preprocess_seconds},
                    {"mean_query_seconds", p.mean_query_seconds},
                    {"p95_query_seconds", p.p95_query_seconds},
                    {"ap", p.ap},
                    {"max_f1", p.max_f1}});
  }
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-18s %8s %8s %12s %12s %12s\n", "predicate", "MAP",
                "maxF1", "prep_s", "query_ms", "p95_ms");
  out << line;
  for (const auto& p : predicates) {
    std::snprintf(line, sizeof line, "%-18s %8.4f %8.4f %12.4f %12.4f %12.4f\n",
                  std::string(predicate_name(p.predicate)).c_str(), p.map, p.mean_max_f1,
                  p.preprocess_seconds, p.mean_query_seconds * 1e3, p.p95_query_seconds * 1e3);
    out << line;
  }
  return out.str();
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "predicate,map,mean_max_f1,preprocess_seconds,mean_query_seconds,p95_query_seconds\n";
  for (const auto& p : predicates) {
    out << predicate_name(p.predicate) << ',' << p.map << ',' << p.mean_max_f1 << ','
        << p.preprocess_seconds << ',' << p.mean_query_seconds << ',' << p.p95_query_seconds
        << '\n';
  }
  return out.str();
}

}  // namespace approxsel
