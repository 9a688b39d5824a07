#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "approxsel/datagen.hpp"
#include "approxsel/error.hpp"
#include "approxsel/tsv.hpp"

using namespace approxsel;

namespace {

GeneratorConfig cu1() {
  GeneratorConfig cfg;
  cfg.target_size = 5000;
  cfg.num_clean = 500;
  cfg.pct_erroneous = 90;
  cfg.extent = 30;
  cfg.pct_token_swap = 20;
  cfg.pct_abbreviation = 50;
  return cfg;
}

std::size_t code_points(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

TEST(Allocation, UniformGivesEqualClusters) {
  const auto sizes = allocate_cluster_sizes(cu1());
  ASSERT_EQ(sizes.size(), 500u);
  for (auto s : sizes) EXPECT_EQ(s, 10u);
}

TEST(Allocation, ZipfDecreasesAndSums) {
  auto cfg = cu1();
  cfg.distribution = Distribution::zipf;
  const auto sizes = allocate_cluster_sizes(cfg);
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), 5000u);
  for (auto s : sizes) EXPECT_GE(s, 1u);
  EXPECT_TRUE(std::is_sorted(sizes.rbegin(), sizes.rend()));
  // Rank-size slope on log-log axes over the head is close to -s.
  const double slope = (std::log(double(sizes[49])) - std::log(double(sizes[0]))) / std::log(50.0);
  EXPECT_NEAR(slope, -1.0, 0.15);
}

TEST(Allocation, PoissonSumsToTarget) {
  auto cfg = cu1();
  cfg.distribution = Distribution::poisson;
  const auto sizes = allocate_cluster_sizes(cfg);
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), 5000u);
  for (auto s : sizes) EXPECT_GE(s, 1u);
}

TEST(Allocation, Apportion) {
  const std::vector<double> w = {1, 1, 1};
  EXPECT_EQ(apportion(w, 10), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_THROW(apportion(w, 2), Error);
}

TEST(Injection, TokenSwap) {
  CounterRng rng(1, 1);
  EXPECT_EQ(inject_token_swap("Beijing Hotel", 100, rng), "Hotel Beijing");
  EXPECT_EQ(inject_token_swap("single", 100, rng), "single");
  EXPECT_EQ(inject_token_swap("a b c", 0, rng), "a b c");
}

TEST(Injection, Abbreviation) {
  CounterRng rng(1, 2);
  const auto dict = AbbreviationDictionary::builtin();
  EXPECT_EQ(inject_abbreviation("AT&T Incorporated", dict, rng), "AT&T Inc.");
  EXPECT_EQ(inject_abbreviation("IBM Corp.", dict, rng), "IBM Corporation");
  EXPECT_EQ(inject_abbreviation("Beijing Hotel", dict, rng), "Beijing Hotel");
}

TEST(Injection, EditCountAndAlphabet) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    CounterRng rng(seed, 3);
    std::vector<std::string> log;
    const std::string s = "Morgan Stanley";
    const auto out = inject_edit_errors(s, 30, rng, &log);
    EXPECT_EQ(log.size(), 4u);  // round(0.3 * 14)
    for (char c : out) EXPECT_TRUE(c == ' ' || s.find(c) != std::string::npos) << out;
  }
  CounterRng rng(9, 9);
  EXPECT_EQ(inject_edit_errors("abc", 0, rng), "abc");
  EXPECT_EQ(inject_edit_errors("", 50, rng), "");
}

TEST(Injection, Utf8Safe) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CounterRng rng(seed, 4);
    const auto out = inject_edit_errors("Zürich Bäckerei", 40, rng);
    // Every byte sequence stays well formed: lead bytes followed by the right
    // number of continuation bytes.
    for (std::size_t i = 0; i < out.size();) {
      const auto c = static_cast<unsigned char>(out[i]);
      const std::size_t n = c < 0x80 ? 1 : c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 0;
      ASSERT_NE(n, 0u) << out;
      for (std::size_t k = 1; k < n; ++k) {
        ASSERT_LT(i + k, out.size());
        ASSERT_EQ(static_cast<unsigned char>(out[i + k]) & 0xC0, 0x80) << out;
      }
      i += n;
    }
    EXPECT_GE(code_points(out), 1u);
  }
}

TEST(Generate, ShapeAndProvenance) {
  const auto ds = generate(company_names(2139), cu1());
  ASSERT_EQ(ds.records.size(), 5000u);
  ASSERT_EQ(ds.provenance.size(), 5000u);
  std::map<std::int64_t, std::size_t> cluster;
  std::size_t clean = 0, marked = 0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& r = ds.records[i];
    const auto& p = ds.provenance[i];
    EXPECT_EQ(r.tid, p.tid);
    EXPECT_EQ(r.cluster_id, p.cluster_id);
    ++cluster[*r.cluster_id];
    clean += p.clean;
    marked += p.marked;
    EXPECT_FALSE(p.clean && p.marked);
    if (p.marked) {
      EXPECT_FALSE(p.errors.empty());
    } else {
      EXPECT_TRUE(p.errors.empty());
    }
  }
  EXPECT_EQ(cluster.size(), 500u);
  for (const auto& [c, n] : cluster) EXPECT_EQ(n, 10u);
  EXPECT_EQ(clean, 500u);
  EXPECT_EQ(marked, 4050u);  // 90% of the 4500 duplicates
}

TEST(Generate, CleanTuplesAreUnchanged) {
  const auto pool = company_names(2139);
  const auto ds = generate(pool, cu1());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const auto& p = ds.provenance[i];
    if (!p.marked) {
      EXPECT_EQ(ds.records[i].text, pool[p.source]);
    }
  }
}

TEST(Generate, Deterministic) {
  const auto pool = company_names(2139);
  auto cfg = cu1();
  const auto a = generate(pool, cfg), b = generate(pool, cfg);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(format_records(a.records), format_records(b.records));
  EXPECT_EQ(format_provenance(a.provenance), format_provenance(b.provenance));
  cfg.seed = 2;
  EXPECT_NE(generate(pool, cfg).records, a.records);
}

TEST(Generate, NoErrorsWhenEverythingOff) {
  auto cfg = cu1();
  cfg.extent = 0;
  cfg.pct_token_swap = 0;
  cfg.pct_abbreviation = 0;
  const auto pool = company_names(2139);
  const auto ds = generate(pool, cfg);
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    EXPECT_EQ(ds.records[i].text, pool[ds.provenance[i].source]);
  }
}

TEST(Generate, Validation) {
  auto cfg = cu1();
  cfg.num_clean = 0;
  EXPECT_THROW(generate(company_names(2139), cfg), Error);
  cfg = cu1();
  cfg.num_clean = 6000;
  EXPECT_THROW(generate(company_names(2139), cfg), Error);
  cfg = cu1();
  cfg.pct_erroneous = 101;
  EXPECT_THROW(generate(company_names(2139), cfg), Error);
  cfg = cu1();
  EXPECT_THROW(generate(company_names(100), cfg), Error);
}

TEST(CompanyNames, DistinctAndDeterministic) {
  const auto a = company_names(2139);
  EXPECT_EQ(a.size(), 2139u);
  EXPECT_EQ(std::set<std::string>(a.begin(), a.end()).size(), a.size());
  EXPECT_EQ(a, company_names(2139));
  EXPECT_EQ(a, read_lines(std::string(APPROXSEL_DATA_DIR) + "/company_names.txt"));
}

TEST(Distribution, Names) {
  for (auto d : {Distribution::uniform, Distribution::zipf, Distribution::poisson}) {
    EXPECT_EQ(parse_distribution(distribution_name(d)), d);
  }
  EXPECT_THROW(parse_distribution("gauss"), Error);
}
