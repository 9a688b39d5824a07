#include "approxsel/predicates.hpp"

#include <algorithm>
#include <cmath>

#include "approxsel/error.hpp"
#include "approxsel/strdist.hpp"

namespace approxsel {

namespace {

// Dense per-thread accumulator; only touched slots are cleared between queries.
struct Scratch {
  std::vector<double> score;
  std::vector<std::uint8_t> seen;
  std::vector<std::uint32_t> touched;

  void reset(std::size_t n) {
    for (auto d : touched) {
      score[d] = 0.0;
      seen[d] = 0;
    }
    touched.clear();
    if (score.size() < n) {
      score.resize(n, 0.0);
      seen.resize(n, 0);
    }
  }

  void add(std::uint32_t doc, double v) {
    if (!seen[doc]) {
      seen[doc] = 1;
      touched.push_back(doc);
    }
    score[doc] += v;
  }
};

Scratch& scratch(std::size_t n) {
  thread_local Scratch s;
  s.reset(n);
  return s;
}

template <class F>
RankedResult collect(const Index& index, const Scratch& s, F&& value) {
  RankedResult out;
  out.rows.reserve(s.touched.size());
  const auto& tids = index.tables().grams.tids;
  for (auto d : s.touched) {
    out.rows.push_back({tids[d], value(d, s.score[d])});
  }
  sort_ranking(out.rows);
  return out;
}

// Walks every (query term, posting) pair.
template <class F>
void join(const Index& index, const QueryTerms& q, F&& visit) {
  const auto& inv = index.gram_postings();
  for (std::size_t i = 0; i < q.ids.size(); ++i) {
    const auto [begin, end] = inv.range(q.ids[i]);
    for (auto p = begin; p < end; ++p) {
      visit(i, inv.doc[p], inv.row[p]);
    }
  }
}

double overlap_weight(const TokenStats& ts, WeightScheme scheme) {
  return scheme == WeightScheme::idf ? ts.idf : ts.rs;
}

void check_overlap_scheme(WeightScheme scheme) {
  if (scheme != WeightScheme::rs && scheme != WeightScheme::idf) {
    fail("invalid_argument", "overlap weights must be rs or idf, got " +
                                 std::string(weight_scheme_name(scheme)));
  }
}

}  // namespace

void QueryParams::validate() const {
  if (!(k3 >= 0.0)) fail("invalid_argument", "k3 must be >= 0");
  check_overlap_scheme(overlap_scheme);
  if (!(edit_theta > 0.0 && edit_theta <= 1.0)) {
    fail("invalid_argument", "edit threshold must be in (0, 1]");
  }
  if (!(ges_theta >= 0.0 && ges_theta <= 1.0)) {
    fail("invalid_argument", "GES threshold must be in [0, 1]");
  }
  if (!(c_ins >= 0.0 && c_ins <= 1.0)) fail("invalid_argument", "c_ins must be in [0, 1]");
  if (!(soft_theta > 0.0 && soft_theta < 1.0)) {
    fail("invalid_argument", "SoftTFIDF threshold must be in (0, 1)");
  }
}

QueryTerms resolve_query(const Index& index, std::string_view query) {
  const auto& vocab = index.tables().grams.table.vocab;
  QueryTerms q;
  std::vector<std::pair<TokenId, std::uint32_t>> known;
  for (const auto& e : qgram_tokenize(query, index.config().tokenizer).entries) {
    if (index.is_pruned(e.token)) {
      continue;
    }
    ++q.distinct;
    if (auto id = vocab.find(e.token)) {
      known.emplace_back(*id, e.count);
    }
  }
  std::sort(known.begin(), known.end());
  for (const auto& [id, tf] : known) {
    q.ids.push_back(id);
    q.tf.push_back(tf);
  }
  return q;
}

RankedResult score_intersect(const Index& index, std::string_view query) {
  const auto q = resolve_query(index, query);
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t, std::uint32_t doc, std::uint64_t) { s.add(doc, 1.0); });
  return collect(index, s, [](std::uint32_t, double v) { return v; });
}

RankedResult score_jaccard(const Index& index, std::string_view query) {
  const auto q = resolve_query(index, query);
  const auto& table = index.tables().grams.table;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t, std::uint32_t doc, std::uint64_t) { s.add(doc, 1.0); });
  const auto qn = static_cast<double>(q.distinct);
  return collect(index, s, [&](std::uint32_t doc, double inter) {
    const auto [begin, end] = table.row_range(doc);
    return inter / (qn + static_cast<double>(end - begin) - inter);
  });
}

RankedResult score_weighted_match(const Index& index, std::string_view query, WeightScheme scheme) {
  check_overlap_scheme(scheme);
  const auto q = resolve_query(index, query);
  const auto& stats = index.tables().grams.stats;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t) {
    s.add(doc, overlap_weight(stats.tokens[q.ids[i]], scheme));
  });
  return collect(index, s, [](std::uint32_t, double v) { return v; });
}

RankedResult score_weighted_jaccard(const Index& index, std::string_view query,
                                    WeightScheme scheme) {
  check_overlap_scheme(scheme);
  const auto q = resolve_query(index, query);
  const auto& t = index.tables();
  const auto& doc_sum = scheme == WeightScheme::idf ? t.idf_sum : t.rs_sum;
  double query_sum = 0.0;
  for (auto id : q.ids) {
    query_sum += overlap_weight(t.grams.stats.tokens[id], scheme);
  }
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t) {
    s.add(doc, overlap_weight(t.grams.stats.tokens[q.ids[i]], scheme));
  });
  return collect(index, s, [&](std::uint32_t doc, double inter) {
    const double denom = query_sum + doc_sum[doc] - inter;
    return denom == 0.0 ? 0.0 : inter / denom;
  });
}

RankedResult score_cosine(const Index& index, std::string_view query) {
  index.require(Predicate::cosine);
  const auto q = resolve_query(index, query);
  const auto& t = index.tables();
  std::vector<double> wq(q.ids.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < q.ids.size(); ++i) {
    wq[i] = q.tf[i] * t.grams.stats.tokens[q.ids[i]].idf;
    norm += wq[i] * wq[i];
  }
  norm = std::sqrt(norm);
  for (auto& w : wq) {
    w = norm > 0.0 ? w / norm : 0.0;
  }
  const auto& wd = t.cosine->weight;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t row) {
    s.add(doc, wq[i] * wd[row]);
  });
  return collect(index, s, [](std::uint32_t, double v) { return v; });
}

RankedResult score_bm25(const Index& index, std::string_view query, double k3) {
  index.require(Predicate::bm25);
  const auto q = resolve_query(index, query);
  std::vector<double> wq(q.ids.size());
  for (std::size_t i = 0; i < q.ids.size(); ++i) {
    wq[i] = (k3 + 1.0) * q.tf[i] / (k3 + q.tf[i]);
  }
  const auto& wd = index.tables().bm25->weight;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t row) {
    s.add(doc, wq[i] * wd[row]);
  });
  return collect(index, s, [](std::uint32_t, double v) { return v; });
}

RankedResult score_lm(const Index& index, std::string_view query) {
  index.require(Predicate::lm);
  const auto q = resolve_query(index, query);
  const auto& lm = *index.tables().lm;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t row) {
    const double pm = lm.pm[row];
    s.add(doc, q.tf[i] * (std::log(pm) - std::log1p(-pm) - std::log(lm.cfcs[q.ids[i]])));
  });
  return collect(index, s,
                 [&](std::uint32_t doc, double v) { return std::exp(v + lm.sumcompm[doc]); });
}

RankedResult score_lm_reference(const Index& index, std::string_view query) {
  index.require(Predicate::lm);
  const auto q = resolve_query(index, query);
  const auto& t = index.tables();
  const auto& lm = *t.lm;
  const auto& table = t.grams.table;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t, std::uint32_t doc, std::uint64_t) { s.add(doc, 0.0); });
  return collect(index, s, [&](std::uint32_t doc, double) {
    const auto [begin, end] = table.row_range(doc);
    const auto first = table.token.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = table.token.begin() + static_cast<std::ptrdiff_t>(end);
    // Query product, then the complement product over D divided by Q ∩ D.
    double log_score = lm.sumcompm[doc];
    for (std::size_t i = 0; i < q.ids.size(); ++i) {
      const auto it = std::lower_bound(first, last, q.ids[i]);
      if (it != last && *it == q.ids[i]) {
        const double pm = lm.pm[static_cast<std::size_t>(it - table.token.begin())];
        log_score += q.tf[i] * (std::log(pm) - std::log1p(-pm));
      } else {
        log_score += q.tf[i] * std::log(lm.cfcs[q.ids[i]]);
      }
    }
    return std::exp(log_score);
  });
}

RankedResult score_hmm(const Index& index, std::string_view query) {
  index.require(Predicate::hmm);
  const auto q = resolve_query(index, query);
  const auto& w = index.tables().hmm->weight;
  auto& s = scratch(index.num_docs());
  join(index, q, [&](std::size_t i, std::uint32_t doc, std::uint64_t row) {
    s.add(doc, q.tf[i] * std::log(w[row]));
  });
  return collect(index, s, [](std::uint32_t, double v) { return std::exp(v); });
}

RankedResult rank(const Index& index, Predicate predicate, std::string_view query,
                  const QueryParams& params) {
  params.validate();
  index.require(predicate);
  switch (predicate) {
    case Predicate::intersect: return score_intersect(index, query);
    case Predicate::jaccard: return score_jaccard(index, query);
    case Predicate::weighted_match:
      return score_weighted_match(index, query, params.overlap_scheme);
    case Predicate::weighted_jaccard:
      return score_weighted_jaccard(index, query, params.overlap_scheme);
    case Predicate::cosine: return score_cosine(index, query);
    case Predicate::bm25: return score_bm25(index, query, params.k3);
    case Predicate::lm: return score_lm(index, query);
    case Predicate::hmm: return score_hmm(index, query);
    case Predicate::edit: return score_edit(index, query, params.edit_theta);
    case Predicate::ges: return score_ges(index, query, params.c_ins);
    // Filter, then rank the survivors by exact GES.
    case Predicate::ges_jaccard:
      return verify_ges(index, query, ges_jaccard_score(index, query, params.ges_theta),
                        params.c_ins);
    case Predicate::ges_apx:
      return verify_ges(index, query, ges_apx_score(index, query, params.ges_theta),
                        params.c_ins);
    case Predicate::soft_tfidf: return soft_tfidf_score(index, query, params.soft_theta);
  }
  fail("invalid_argument", "unhandled predicate");
}

RankedResult approximate_select(const Index& index, Predicate predicate, std::string_view query,
                                const QueryParams& params, const SelectOptions& options) {
  auto result = rank(index, predicate, query, params);
  if (options.min_score) {
    const double m = *options.min_score;
    std::erase_if(result.rows, [m](const ScoredTid& r) { return !(r.score >= m); });
  }
  if (options.top_k && result.rows.size() > *options.top_k) {
    result.rows.resize(*options.top_k);
  }
  return result;
}

}  // namespace approxsel
