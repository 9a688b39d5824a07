// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--strict] [--only 1,5,9]
//
// Exits 0 once every selected criterion has been evaluated, or nonzero on an
// internal error. With --strict any FAIL also makes the exit status nonzero.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "approxsel/datagen.hpp"
#include "approxsel/eval.hpp"
#include "approxsel/index.hpp"
#include "approxsel/minhash.hpp"
#include "approxsel/predicates.hpp"
#include "approxsel/sqlgen.hpp"
#include "approxsel/strdist.hpp"
#include "approxsel/tsv.hpp"
#include "oracle.hpp"
#include "random_corpus.hpp"

using namespace approxsel;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// ---- randomized corpora ---------------------------------------------------

struct RandomCase {
  std::vector<Record> records;
  std::vector<std::string> queries;
};

// 100 corpora of at most 50 tuples over "abcdefgh".
const std::vector<RandomCase>& random_cases() {
  static const auto cases = [] {
    std::vector<RandomCase> out;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      testing_support::RandomCorpus gen(1000 + seed);
      RandomCase c;
      c.records = gen.records(gen.pick(5, 50));
      for (int k = 0; k < 3; ++k) c.queries.push_back(gen.query(c.records));
      out.push_back(std::move(c));
    }
    return out;
  }();
  return cases;
}

std::map<Tid, double> as_map(const RankedResult& r) {
  std::map<Tid, double> m;
  for (const auto& row : r.rows) m[row.tid] = row.score;
  return m;
}

// Mismatch description, or empty. `boundary` lists tids whose membership hinges
// on a threshold comparison closer than rounding error; they are ignored.
std::string compare(const RankedResult& got, const oracle::Scores& want, double tol,
                    const std::set<Tid>& boundary = {}) {
  auto g = as_map(got);
  std::map<Tid, double> w(want.begin(), want.end());
  for (auto t : boundary) {
    g.erase(t);
    w.erase(t);
  }
  if (g.size() != w.size()) return fmt("%zu tuples vs %zu expected", g.size(), w.size());
  for (const auto& [tid, v] : w) {
    const auto it = g.find(tid);
    if (it == g.end()) return fmt("tid %lld missing", static_cast<long long>(tid));
    const bool ok = tol == 0.0 ? it->second == v
                               : std::abs(it->second - v) <= tol * std::max(1.0, std::abs(v));
    if (!ok) return fmt("tid %lld: %.17g vs %.17g", static_cast<long long>(tid), it->second, v);
  }
  return "";
}

// Filter-then-verify reference: tuples whose filter score reaches theta,
// scored with exact GES.
oracle::Scores verified(const oracle::Docs& docs, const std::string& q, const oracle::Scores& filt,
                        double theta, std::set<Tid>& boundary) {
  std::map<Tid, std::string> text;
  for (const auto& d : docs) text[d.tid] = d.text;
  oracle::Scores out;
  for (const auto& [tid, v] : filt) {
    if (std::abs(v - theta) < 1e-9) boundary.insert(tid);
    if (v >= theta) out[tid] = oracle::ges_exact(docs, q, text[tid], 0.5);
  }
  return out;
}

Outcome criterion1() {
  const auto start = Clock::now();
  const oracle::Tok tok;
  const QueryParams params;
  const auto seed = BuildParams{}.minhash_seed;
  std::size_t checks = 0;
  for (std::size_t ci = 0; ci < random_cases().size(); ++ci) {
    const auto& c = random_cases()[ci];
    const auto index = build_index(c.records, IndexConfig{});
    for (const auto& q : c.queries) {
      std::set<Tid> edit_boundary;
      for (const auto& d : c.records) {
        if (std::abs(oracle::edit_sim(oracle::upper(q), oracle::upper(d.text)) - params.edit_theta) <
            1e-9) {
          edit_boundary.insert(d.tid);
        }
      }
      std::set<Tid> gj_boundary, ga_boundary;
      const auto gj = verified(c.records, q, oracle::ges_jaccard_filter(c.records, q, tok),
                               params.ges_theta, gj_boundary);
      const auto ga = verified(c.records, q,
                               oracle::ges_apx_filter(c.records, q, tok, 5, seed),
                               params.ges_theta, ga_boundary);
      const std::vector<std::tuple<Predicate, oracle::Scores, double, std::set<Tid>>> rows = {
          {Predicate::intersect, oracle::intersect(c.records, q, tok), 0.0, {}},
          {Predicate::jaccard, oracle::jaccard(c.records, q, tok), 0.0, {}},
          {Predicate::weighted_match, oracle::weighted_match(c.records, q, tok, true), 1e-9, {}},
          {Predicate::weighted_jaccard, oracle::weighted_jaccard(c.records, q, tok, true), 1e-9, {}},
          {Predicate::cosine, oracle::cosine(c.records, q, tok), 1e-9, {}},
          {Predicate::bm25, oracle::bm25(c.records, q, tok, 1.5, 0.675, 8.0), 1e-9, {}},
          {Predicate::lm, oracle::lm(c.records, q, tok), 1e-9, {}},
          {Predicate::hmm, oracle::hmm(c.records, q, tok, 0.2), 1e-9, {}},
          {Predicate::edit, oracle::edit_select(c.records, q, params.edit_theta), 1e-9,
           edit_boundary},
          {Predicate::ges, oracle::ges(c.records, q, tok, 0.5), 1e-9, {}},
          {Predicate::ges_jaccard, gj, 1e-9, gj_boundary},
          {Predicate::ges_apx, ga, 1e-9, ga_boundary},
          {Predicate::soft_tfidf, oracle::soft_tfidf(c.records, q, params.soft_theta), 1e-9, {}},
      };
      for (const auto& [p, want, tol, boundary] : rows) {
        const auto diff = compare(rank(index, p, q, params), want, tol, boundary);
        ++checks;
        if (!diff.empty()) {
          return {false, fmt("corpus %zu, %s, query '%s': %s", ci,
                             std::string(predicate_name(p)).c_str(), q.c_str(), diff.c_str())};
        }
      }
    }
  }
  const double t = seconds_since(start);
  return {t < 60.0, fmt("%zu rankings over 100 corpora match the oracle; %.1fs (limit 60s)", checks, t)};
}

// Ranking `got` is a valid order of `ref` scores: non-increasing, near-equal
// scores ordered by tid.
std::string valid_order(const RankedResult& got, const oracle::Scores& ref) {
  if (got.size() != ref.size()) return fmt("%zu tuples vs %zu", got.size(), ref.size());
  for (std::size_t i = 0; i < got.rows.size(); ++i) {
    if (!ref.count(got.rows[i].tid)) return "unexpected tuple";
    if (i == 0) continue;
    const auto a = got.rows[i - 1].tid, b = got.rows[i].tid;
    const double sa = ref.at(a), sb = ref.at(b);
    const double tol = 1e-9 * std::max(1.0, std::abs(sa));
    if (sa < sb - tol) return fmt("tid %lld before %lld", (long long)a, (long long)b);
    if (std::abs(sa - sb) <= tol && a > b) {
      return fmt("tie %lld/%lld out of tid order", (long long)a, (long long)b);
    }
  }
  return "";
}

Outcome criterion2() {
  const oracle::Tok tok;
  std::size_t checks = 0;
  for (std::size_t ci = 0; ci < random_cases().size(); ++ci) {
    const auto& c = random_cases()[ci];
    const auto index = build_index(c.records, IndexConfig{});
    for (const auto& q : c.queries) {
      const auto lm = valid_order(score_lm(index, q), oracle::lm_full_log(c.records, q, tok));
      const auto hmm = valid_order(score_hmm(index, q), oracle::hmm_full_log(c.records, q, tok, 0.2));
      checks += 2;
      if (!lm.empty()) return {false, fmt("corpus %zu lm '%s': %s", ci, q.c_str(), lm.c_str())};
      if (!hmm.empty()) return {false, fmt("corpus %zu hmm '%s': %s", ci, q.c_str(), hmm.c_str())};
    }
  }
  return {true, fmt("%zu LM/HMM rankings equal the unsimplified products' order", checks)};
}

Outcome criterion3() {
  std::size_t misses = 0, truth = 0, candidates = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    testing_support::RandomCorpus gen(3000 + seed);
    const auto recs = gen.records(200);
    const auto index = build_index(recs, IndexConfig{});
    for (int k = 0; k < 10; ++k) {
      const auto q = gen.query(recs);
      for (double theta : {0.7, 0.8, 0.9}) {
        const auto cand = qgram_count_filter(index, q, theta);
        const std::set<Tid> cs(cand.begin(), cand.end());
        candidates += cs.size();
        for (const auto& [tid, v] : oracle::edit_select(recs, q, theta)) {
          ++truth;
          misses += !cs.count(tid);
        }
      }
    }
  }
  return {misses == 0, fmt("%zu false negatives among %zu true matches (%zu candidates)", misses,
                           truth, candidates)};
}

Outcome criterion4() {
  const std::pair<const char*, const char*> pairs[20] = {
      {"BEIJING", "BEJING"},     {"HOTEL", "HOTL"},        {"CORPORATION", "CORP."},
      {"INCORPORATED", "INC."},  {"MORGAN", "MORGEN"},     {"STANLEY", "STANELY"},
      {"INTERNATIONAL", "INTL."}, {"COMPANY", "CO."},      {"SYSTEMS", "SYSTEM"},
      {"GROUP", "GRUOP"},        {"HOLDINGS", "HOLDING"},  {"TECHNOLOGIES", "TECHNOLOGY"},
      {"PACIFIC", "ATLANTIC"},   {"GLOBAL", "GLOBE"},      {"ENERGY", "ENERGIES"},
      {"NATIONAL", "RATIONAL"},  {"AT&T", "AT&T"},         {"BANK", "BANKS"},
      {"DATA", "BASE"},          {"MICROSOFT", "MICROSFT"}};
  double worst = 0;
  std::string worst_pair;
  for (const auto& [x, y] : pairs) {
    const auto gx = word_qgram_set(x, TokenizerConfig{}), gy = word_qgram_set(y, TokenizerConfig{});
    const double j = set_jaccard(gx, gy);
    double sum = 0;
    for (std::uint64_t s = 1; s <= 2000; ++s) {
      const MinHasher h(5, s);
      sum += sim_mh(h.signature(gx), h.signature(gy));
    }
    const double gap = std::abs(sum / 2000.0 - j);
    if (gap > worst) {
      worst = gap;
      worst_pair = std::string(x) + "/" + y;
    }
  }
  return {worst <= 0.05, fmt("max |mean sim_mh - Jaccard| = %.4f (%s), limit 0.05", worst,
                             worst_pair.c_str())};
}

// ---- generated datasets ---------------------------------------------------

const std::vector<std::string>& pool() {
  static const auto p = read_lines(std::string(APPROXSEL_DATA_DIR) + "/company_names.txt");
  return p;
}

GeneratorConfig cu1(std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.target_size = 5000;
  cfg.num_clean = 500;
  cfg.pct_erroneous = 90;
  cfg.extent = 30;
  cfg.pct_token_swap = 20;
  cfg.pct_abbreviation = 50;
  cfg.seed = seed;
  return cfg;
}

using Results = std::map<Predicate, PredicateReport>;

Results bench(const Index& index, const std::vector<Predicate>& preds, std::uint64_t seed,
              std::size_t n_queries = 200, QueryParams params = {}) {
  BenchmarkOptions opt;
  opt.n_queries = n_queries;
  opt.seed = seed;
  opt.params = params;
  Results out;
  for (auto& r : run_benchmark(index, preds, opt).predicates) out[r.predicate] = r;
  return out;
}

IndexConfig index_config(int q, std::vector<Predicate> preds, double prune = 0.0) {
  IndexConfig cfg;
  cfg.tokenizer.q = q;
  cfg.predicates = std::move(preds);
  cfg.params.prune_rate = prune;
  return cfg;
}

// Dirty dataset results shared by criteria 5, 6 and 8.
struct DirtyRun {
  Results q2, q3;
  std::map<double, Results> ges;  // by theta
};

const DirtyRun& dirty(std::uint64_t seed) {
  static std::map<std::uint64_t, DirtyRun> cache;
  auto it = cache.find(seed);
  if (it != cache.end()) return it->second;
  DirtyRun run;
  const auto records = generate(pool(), cu1(seed)).records;
  const std::vector<Predicate> base = {Predicate::intersect, Predicate::jaccard, Predicate::cosine,
                                       Predicate::bm25, Predicate::hmm, Predicate::lm};
  auto preds = base;
  preds.push_back(Predicate::ges_jaccard);
  preds.push_back(Predicate::ges_apx);
  const auto i2 = build_index(records, index_config(2, preds));
  run.q2 = bench(i2, base, seed);
  for (double theta : {0.7, 0.8, 0.9}) {
    QueryParams p;
    p.ges_theta = theta;
    run.ges[theta] = bench(i2, {Predicate::ges_jaccard, Predicate::ges_apx}, seed, 200, p);
  }
  const std::vector<Predicate> q3 = {Predicate::jaccard, Predicate::cosine, Predicate::bm25,
                                     Predicate::hmm};
  run.q3 = bench(build_index(records, index_config(3, q3)), q3, seed);
  return cache.emplace(seed, std::move(run)).first->second;
}

double map_of(const Results& r, Predicate p) { return r.at(p).map; }

Outcome criterion5() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto& r = dirty(s).q2;
    const double jac = map_of(r, Predicate::jaccard), cos = map_of(r, Predicate::cosine),
                 bm = map_of(r, Predicate::bm25), hmm = map_of(r, Predicate::hmm);
    ok = ok && bm >= cos && hmm >= cos && cos >= jac;
    detail += fmt("s%llu bm25 %.4f hmm %.4f cosine %.4f jaccard %.4f; ", (unsigned long long)s, bm,
                  hmm, cos, jac);
  }
  const double t = seconds_since(start);
  ok = ok && t < 600.0;
  return {ok, detail + fmt("%.0fs (limit 600s)", t)};
}

Outcome criterion6() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto& d = dirty(s);
    detail += fmt("s%llu", (unsigned long long)s);
    for (auto p : {Predicate::jaccard, Predicate::cosine, Predicate::hmm, Predicate::bm25}) {
      const double a = map_of(d.q2, p), b = map_of(d.q3, p);
      ok = ok && a > b;
      detail += fmt(" %s %.4f>%.4f", std::string(predicate_name(p)).c_str(), a, b);
    }
    detail += "; ";
  }
  return {ok, detail};
}

Outcome criterion7() {
  bool ok = true;
  std::string detail;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    auto f1 = cu1(s);
    f1.pct_erroneous = 50;
    f1.extent = 0;
    f1.pct_token_swap = 0;
    f1.pct_abbreviation = 50;
    auto f2 = f1;
    f2.pct_token_swap = 20;
    f2.pct_abbreviation = 0;
    const std::vector<Predicate> preds = {Predicate::edit, Predicate::bm25};
    const auto r1 = bench(build_index(generate(pool(), f1).records, index_config(2, preds)), preds, s);
    const auto r2 = bench(build_index(generate(pool(), f2).records, index_config(2, preds)), preds, s);
    const double e1 = map_of(r1, Predicate::edit), b1 = map_of(r1, Predicate::bm25);
    const double e2 = map_of(r2, Predicate::edit), b2 = map_of(r2, Predicate::bm25);
    ok = ok && b1 - e1 >= 0.03 && e2 < 0.9 && b2 >= 0.95;
    detail += fmt("s%llu F1 edit %.4f bm25 %.4f, F2 edit %.4f bm25 %.4f; ", (unsigned long long)s,
                  e1, b1, e2, b2);
  }
  return {ok, detail};
}

Outcome criterion8() {
  bool monotone = true, close = true;
  std::string detail;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto& g = dirty(s).ges;
    detail += fmt("s%llu", (unsigned long long)s);
    double prev = 2.0;
    for (double theta : {0.7, 0.8, 0.9}) {
      const double j = map_of(g.at(theta), Predicate::ges_jaccard);
      const double a = map_of(g.at(theta), Predicate::ges_apx);
      monotone = monotone && j <= prev;
      close = close && std::abs(a - j) <= 0.03;
      prev = j;
      detail += fmt(" %.1f: jac %.4f apx %.4f", theta, j, a);
    }
    detail += "; ";
  }
  return {monotone && close, detail + fmt("monotone %s, apx within 0.03 %s",
                                          monotone ? "yes" : "no", close ? "yes" : "no")};
}

Outcome criterion9() {
  bool ok = true;
  std::string detail;
  const std::vector<Predicate> preds = {Predicate::intersect, Predicate::jaccard, Predicate::bm25};
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const auto records = generate(pool(), cu1(s)).records;
    const auto r0 = bench(build_index(records, index_config(3, preds, 0.0)), preds, s);
    const auto r1 = bench(build_index(records, index_config(3, preds, 0.25)), preds, s);
    const double t0 = r0.at(Predicate::bm25).mean_query_seconds;
    const double t1 = r1.at(Predicate::bm25).mean_query_seconds;
    const double drop = 1.0 - t1 / t0;
    const double i0 = map_of(r0, Predicate::intersect), i1 = map_of(r1, Predicate::intersect);
    const double j0 = map_of(r0, Predicate::jaccard), j1 = map_of(r1, Predicate::jaccard);
    ok = ok && i1 > i0 && j1 > j0 && drop >= 0.25;
    detail += fmt("s%llu intersect %.4f->%.4f jaccard %.4f->%.4f bm25 time -%.0f%%; ",
                  (unsigned long long)s, i0, i1, j0, j1, 100 * drop);
  }
  return {ok, detail + "q=3"};
}

Outcome criterion10() {
  auto cfg = cu1(1);
  cfg.target_size = 10000;
  cfg.num_clean = 1000;
  const auto records = generate(pool(), cfg).records;
  const auto index = build_index(records, IndexConfig{});
  const std::vector<Predicate> single = {Predicate::intersect, Predicate::jaccard,
                                         Predicate::weighted_match, Predicate::weighted_jaccard,
                                         Predicate::cosine, Predicate::bm25, Predicate::hmm};
  const std::vector<Predicate> combo = {Predicate::soft_tfidf, Predicate::ges,
                                        Predicate::ges_jaccard, Predicate::ges_apx};
  auto all = single;
  all.insert(all.end(), combo.begin(), combo.end());
  const auto r = bench(index, all, 1, 100);
  const auto ms = [&](Predicate p) { return 1e3 * r.at(p).mean_query_seconds; };
  double slowest_single = 0, fastest_combo = 1e300;
  std::string slow_name, fast_name;
  for (auto p : single) {
    if (ms(p) > slowest_single) {
      slowest_single = ms(p);
      slow_name = predicate_name(p);
    }
  }
  for (auto p : combo) {
    if (ms(p) < fastest_combo) {
      fastest_combo = ms(p);
      fast_name = predicate_name(p);
    }
  }
  const double ratio = ms(Predicate::hmm) / ms(Predicate::intersect);
  const bool hmm_ok = ratio <= 2.0;
  const bool combo_ok = fastest_combo > slowest_single;
  std::string detail = fmt("hmm/intersect %.2fx (limit 2x); slowest single-join %s %.3fms, "
                           "fastest combination %s %.3fms; ",
                           ratio, slow_name.c_str(), slowest_single, fast_name.c_str(),
                           fastest_combo);
  for (auto p : all) detail += fmt("%s %.3f ", std::string(predicate_name(p)).c_str(), ms(p));
  return {hmm_ok && combo_ok, detail + "ms"};
}

Outcome criterion11() {
  std::size_t files = 0;
  for (const auto& name : sql_template_names()) {
    for (auto phase : {SqlPhase::preprocess, SqlPhase::query}) {
      const auto path = std::filesystem::path(APPROXSEL_GOLDEN_DIR) / "sql" /
                        (name + "." + std::string(sql_phase_name(phase)) + ".sql");
      std::ifstream in(path, std::ios::binary);
      if (!in) return {false, "missing golden " + path.filename().string()};
      std::stringstream s;
      s << in.rdbuf();
      if (s.str() != emit_sql(name, phase)) return {false, "differs: " + path.filename().string()};
      ++files;
    }
  }
  return {true, fmt("%zu golden files byte-identical", files)};
}

Outcome criterion12() {
  struct Fixture {
    std::vector<Tid> ranking;
    std::unordered_set<Tid> relevant;
    double ap;
    double f1;
  };
  // Hand values: AP = (sum of hits/rank) / |relevant|; max-F1 = max over
  // relevant ranks k of 2 * hits / (k + |relevant|).
  const std::vector<Fixture> fixtures = {
      {{1, 2, 3}, {1, 3}, (1.0 / 1 + 2.0 / 3) / 2, 2.0 * 2 / (3 + 2)},
      {{2, 1}, {1}, (1.0 / 2) / 1, 2.0 * 1 / (2 + 1)},
      {{1, 2}, {1, 2}, (1.0 / 1 + 2.0 / 2) / 2, 2.0 * 2 / (2 + 2)},
      {{}, {1}, 0.0, 0.0},
      {{4, 5, 6}, {1}, 0.0, 0.0},
      {{1}, {1}, 1.0, 1.0},
      {{1}, {1, 2}, (1.0 / 1) / 2, 2.0 * 1 / (1 + 2)},
      {{3, 1, 2}, {1, 2}, (1.0 / 2 + 2.0 / 3) / 2, 2.0 * 2 / (3 + 2)},
      {{1, 3, 2}, {1, 2}, (1.0 / 1 + 2.0 / 3) / 2, 2.0 * 2 / (3 + 2)},
      {{3, 4, 1}, {1}, (1.0 / 3) / 1, 2.0 * 1 / (3 + 1)},
      {{1, 2, 3, 4}, {2, 4}, (1.0 / 2 + 2.0 / 4) / 2, 2.0 * 2 / (4 + 2)},
      {{1, 2, 3, 4}, {1, 4}, (1.0 / 1 + 2.0 / 4) / 2, 2.0 * 1 / (1 + 2)},
      {{5, 1, 6, 2, 7}, {1, 2, 3}, (1.0 / 2 + 2.0 / 4) / 3, 2.0 * 2 / (4 + 3)},
      {{1, 2, 3}, {1, 2, 3}, (1.0 / 1 + 2.0 / 2 + 3.0 / 3) / 3, 2.0 * 3 / (3 + 3)},
      {{9, 8, 7, 1}, {1}, (1.0 / 4) / 1, 2.0 * 1 / (4 + 1)},
      {{1, 9, 8, 7, 2}, {1, 2}, (1.0 / 1 + 2.0 / 5) / 2, 2.0 * 1 / (1 + 2)},
      {{2, 9, 1, 8, 3}, {1, 2, 3}, (1.0 / 1 + 2.0 / 3 + 3.0 / 5) / 3, 2.0 * 3 / (5 + 3)},
      {{9, 1, 2, 3, 4}, {1, 2, 3, 4}, (1.0 / 2 + 2.0 / 3 + 3.0 / 4 + 4.0 / 5) / 4,
       2.0 * 4 / (5 + 4)},
      {{1, 9}, {1, 2, 3, 4}, (1.0 / 1) / 4, 2.0 * 1 / (1 + 4)},
      {{9, 8, 1, 2, 3, 4, 7}, {1, 2, 3, 4}, (1.0 / 3 + 2.0 / 4 + 3.0 / 5 + 4.0 / 6) / 4,
       2.0 * 4 / (6 + 4)},
  };
  std::size_t i = 0;
  for (const auto& f : fixtures) {
    RankedResult r;
    double s = 1000;
    for (auto t : f.ranking) r.rows.push_back({t, s--});
    const double ap = average_precision(r, f.relevant), f1 = max_f1(r, f.relevant);
    if (ap != f.ap || f1 != f.f1) {
      return {false, fmt("fixture %zu: ap %.17g vs %.17g, max-F1 %.17g vs %.17g", i, ap, f.ap, f1,
                         f.f1)};
    }
    ++i;
  }
  return {true, fmt("%zu fixtures exact, including 0.8333 and 0.6667", fixtures.size())};
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      for (std::string item; std::getline(list, item, ',');) only.insert(std::stoi(item));
    } else {
      std::fprintf(stderr, "usage: acceptance [--strict] [--only N,M,...]\n");
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", criterion1},     {"rewrite safety", criterion2},
      {"filter completeness", criterion3},    {"min-hash estimator", criterion4},
      {"trend reproduction", criterion5},     {"q sensitivity", criterion6},
      {"error-type specificity", criterion7}, {"GES thresholds", criterion8},
      {"pruning", criterion9},                {"performance sanity", criterion10},
      {"SQL goldens", criterion11},           {"evaluation arithmetic", criterion12},
  };
  int failures = 0;
  try {
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      const int n = static_cast<int>(i + 1);
      if (!only.empty() && !only.count(n)) continue;
      const auto start = Clock::now();
      const auto o = criteria[i].second();
      failures += !o.pass;
      std::printf("criterion %2d %-24s %s  (%.1fs) %s\n", n, criteria[i].first,
                  o.pass ? "PASS" : "FAIL", seconds_since(start), o.detail.c_str());
      std::fflush(stdout);
    }
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 3;
  }
  std::printf("%d of %d criteria failed\n", failures,
              static_cast<int>(only.empty() ? criteria.size() : only.size()));
  return strict && failures > 0 ? 1 : 0;
}
