#include "approxsel/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "approxsel/error.hpp"
#include "approxsel/tokenizer.hpp"

namespace approxsel {

namespace {

// Streams reserved for dataset-level draws; per-record streams are the tid.
constexpr std::uint64_t kSelectStream = ~0ULL;
constexpr std::uint64_t kAllocStream = ~1ULL;
constexpr std::uint64_t kMarkStream = ~2ULL;

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) {
      ++i;
    }
    const auto start = i;
    while (i < s.size() && !is_space(s[i])) {
      ++i;
    }
    if (i > start) {
      out.emplace_back(s.substr(start, i - start));
    }
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) {
      out += ' ';
    }
    out += w;
  }
  return out;
}

// First k entries of a uniformly random permutation of [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, CounterRng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

std::size_t stochastic_round(double x, CounterRng& rng) {
  const double fl = std::floor(x);
  return static_cast<std::size_t>(fl) + (rng.bernoulli(x - fl) ? 1 : 0);
}

std::uint64_t poisson(double lambda, CounterRng& rng) {
  if (lambda < 30.0) {
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = rng.uniform();
    while (p > limit) {
      ++k;
      p *= rng.uniform();
    }
    return k;
  }
  // Normal approximation via Box-Muller.
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  return static_cast<std::uint64_t>(std::max(0.0, std::round(lambda + std::sqrt(lambda) * z)));
}

// UTF-8 code points as substrings; stray continuation bytes stand alone.
std::vector<std::string> split_code_points(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i + 1;
    if (static_cast<unsigned char>(s[i]) >= 0xC0) {
      while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) {
        ++j;
      }
    }
    out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

void check_percent(double v, const char* name) {
  if (!(v >= 0.0 && v <= 100.0)) {
    fail("invalid_argument", std::string(name) + " must be within [0, 100]");
  }
}

}  // namespace

std::string_view distribution_name(Distribution d) noexcept {
  switch (d) {
    case Distribution::uniform:
      return "uniform";
    case Distribution::zipf:
      return "zipf";
    case Distribution::poisson:
      return "poisson";
  }
  return "uniform";
}

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform") {
    return Distribution::uniform;
  }
  if (name == "zipf" || name == "zipfian") {
    return Distribution::zipf;
  }
  if (name == "poisson") {
    return Distribution::poisson;
  }
  fail("invalid_argument",
       "unknown distribution '" + std::string(name) + "' (expected uniform, zipf, poisson)");
}

AbbreviationDictionary::AbbreviationDictionary(
    std::vector<std::pair<std::string, std::string>> pairs)
    : pairs_(std::move(pairs)) {
  for (const auto& [a, b] : pairs_) {
    if (split_words(a).size() != 1 || split_words(b).size() != 1) {
      fail("invalid_argument", "abbreviation entries must be single words");
    }
  }
}

AbbreviationDictionary AbbreviationDictionary::builtin() {
  return AbbreviationDictionary({{"Inc.", "Incorporated"},
                                 {"Corp.", "Corporation"},
                                 {"Co.", "Company"},
                                 {"Intl.", "International"}});
}

std::optional<std::string> AbbreviationDictionary::counterpart(std::string_view word) const {
  const auto key = fold_case(word);
  for (const auto& [a, b] : pairs_) {
    if (fold_case(a) == key) {
      return b;
    }
    if (fold_case(b) == key) {
      return a;
    }
  }
  return std::nullopt;
}

void GeneratorConfig::validate() const {
  if (num_clean == 0) {
    fail("invalid_argument", "num_clean must be positive");
  }
  if (num_clean > target_size) {
    fail("invalid_argument", "num_clean must not exceed target_size");
  }
  check_percent(pct_erroneous, "pct_erroneous");
  check_percent(extent, "extent");
  check_percent(pct_token_swap, "pct_token_swap");
  check_percent(pct_abbreviation, "pct_abbreviation");
  if (!(zipf_s > 0.0) || !std::isfinite(zipf_s)) {
    fail("invalid_argument", "zipf exponent must be positive");
  }
  if (!(poisson_lambda >= 0.0) || !std::isfinite(poisson_lambda)) {
    fail("invalid_argument", "poisson lambda must be non-negative");
  }
}

std::vector<std::size_t> apportion(std::span<const double> weights, std::size_t total) {
  const auto n = weights.size();
  if (n == 0 || total < n) {
    fail("invalid_argument", "cannot give every share at least one unit");
  }
  std::vector<std::size_t> out(n, 1);
  const auto spare = total - n;
  double sum = 0.0;
  for (const double w : weights) {
    sum += std::max(0.0, w);
  }
  if (spare == 0) {
    return out;
  }
  std::vector<double> exact(n);
  for (std::size_t i = 0; i < n; ++i) {
    exact[i] = sum > 0.0 ? static_cast<double>(spare) * std::max(0.0, weights[i]) / sum
                         : static_cast<double>(spare) / static_cast<double>(n);
  }
  std::size_t given = 0;
  std::vector<std::pair<double, std::size_t>> rema(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fl = static_cast<std::size_t>(std::floor(exact[i]));
    out[i] += fl;
    given += fl;
    rema[i] = {exact[i] - static_cast<double>(fl), i};
  }
  std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  // Floating error can leave `given` slightly off in either direction.
  for (std::size_t k = 0; given < spare; k = (k + 1) % n, ++given) {
    ++out[rema[k].second];
  }
  for (std::size_t k = n; given > spare; ++k) {
    auto& slot = out[rema[k % n].second];
    if (slot > 1) {
      --slot;
      --given;
    }
  }
  return out;
}

std::vector<std::size_t> allocate_cluster_sizes(const GeneratorConfig& cfg) {
  cfg.validate();
  const auto n = cfg.num_clean;
  std::vector<double> w(n, 1.0);
  switch (cfg.distribution) {
    case Distribution::uniform:
      break;
    case Distribution::zipf:
      for (std::size_t r = 0; r < n; ++r) {
        w[r] = 1.0 / std::pow(static_cast<double>(r + 1), cfg.zipf_s);
      }
      break;
    case Distribution::poisson: {
      const double lambda = cfg.poisson_lambda > 0.0
                                ? cfg.poisson_lambda
                                : static_cast<double>(cfg.target_size) / static_cast<double>(n);
      CounterRng rng(cfg.seed, kAllocStream);
      for (auto& x : w) {
        x = static_cast<double>(poisson(lambda, rng));
      }
      break;
    }
  }
  return apportion(w, cfg.target_size);
}

std::string inject_edit_errors(std::string_view s, double extent_pct, CounterRng& rng,
                               std::vector<std::string>* log) {
  auto chars = split_code_points(s);
  const auto count = static_cast<std::size_t>(
      std::llround(extent_pct / 100.0 * static_cast<double>(chars.size())));
  if (count == 0 || chars.empty()) {
    return std::string(s);
  }
  std::vector<std::string> alphabet;
  for (const auto& c : chars) {
    if (!(c.size() == 1 && is_space(c[0]))) {
      alphabet.push_back(c);
    }
  }
  if (alphabet.empty()) {
    alphabet = {"a", "e", "o"};
  }
  const auto typo = [&] { return alphabet[rng.below(alphabet.size())]; };

  auto positions = sample_without_replacement(chars.size(), std::min(count, chars.size()), rng);
  std::sort(positions.rbegin(), positions.rend());
  // Right to left, so earlier positions keep their meaning.
  for (const auto pos : positions) {
    const auto op = rng.below(4);
    std::string what;
    if (op == 0) {
      chars.insert(chars.begin() + static_cast<std::ptrdiff_t>(pos), typo());
      what = "insert";
    } else if (op == 1) {
      chars.erase(chars.begin() + static_cast<std::ptrdiff_t>(pos));
      what = "delete";
    } else if (op == 2 || chars.size() < 2) {
      auto c = typo();
      for (int tries = 0; c == chars[pos] && tries < 16; ++tries) {
        c = typo();
      }
      chars[pos] = std::move(c);
      what = "replace";
    } else {
      const auto other = pos + 1 < chars.size() ? pos + 1 : pos - 1;
      std::swap(chars[pos], chars[other]);
      what = "swap";
    }
    if (log) {
      log->push_back("edit:" + what + "@" + std::to_string(pos));
    }
  }
  std::string out;
  for (const auto& c : chars) {
    out += c;
  }
  return out;
}

std::string inject_token_swap(std::string_view s, double pct, CounterRng& rng, bool arbitrary,
                              std::vector<std::string>* log) {
  auto words = split_words(s);
  if (words.size() < 2 || pct <= 0.0) {
    return std::string(s);
  }
  const auto pairs = words.size() - 1;
  const auto count =
      std::min(pairs, stochastic_round(pct / 100.0 * static_cast<double>(pairs), rng));
  if (count == 0) {
    return std::string(s);
  }
  if (arbitrary) {
    for (std::size_t k = 0; k < count; ++k) {
      const auto pick = sample_without_replacement(words.size(), 2, rng);
      std::swap(words[pick[0]], words[pick[1]]);
      if (log) {
        log->push_back("token_swap:" + std::to_string(pick[0]) + "<->" + std::to_string(pick[1]));
      }
    }
  } else {
    for (const auto i : sample_without_replacement(pairs, count, rng)) {
      std::swap(words[i], words[i + 1]);
      if (log) {
        log->push_back("token_swap:" + std::to_string(i) + "<->" + std::to_string(i + 1));
      }
    }
  }
  return join_words(words);
}

std::string inject_abbreviation(std::string_view s, const AbbreviationDictionary& dict,
                                CounterRng& rng, std::vector<std::string>* log) {
  auto words = split_words(s);
  std::vector<std::pair<std::size_t, std::string>> hits;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (auto c = dict.counterpart(words[i])) {
      hits.emplace_back(i, std::move(*c));
    }
  }
  if (hits.empty()) {
    return std::string(s);
  }
  auto& [i, replacement] = hits[rng.below(hits.size())];
  if (log) {
    log->push_back("abbreviation:" + words[i] + "->" + replacement);
  }
  words[i] = std::move(replacement);
  return join_words(words);
}

GeneratedDataset generate(std::span<const std::string> clean, const GeneratorConfig& cfg) {
  cfg.validate();
  if (clean.size() < cfg.num_clean) {
    fail("invalid_argument", "clean pool has " + std::to_string(clean.size()) +
                                 " strings, fewer than num_clean " +
                                 std::to_string(cfg.num_clean));
  }
  CounterRng select_rng(cfg.seed, kSelectStream);
  const auto sources = sample_without_replacement(clean.size(), cfg.num_clean, select_rng);
  const auto sizes = allocate_cluster_sizes(cfg);

  const auto duplicates = cfg.target_size - cfg.num_clean;
  const auto marked_count = std::min<std::size_t>(
      duplicates, static_cast<std::size_t>(std::ceil(
                      cfg.pct_erroneous * static_cast<double>(duplicates) / 100.0 - 1e-9)));
  CounterRng mark_rng(cfg.seed, kMarkStream);
  std::vector<char> marked(duplicates, 0);
  for (const auto d : sample_without_replacement(duplicates, marked_count, mark_rng)) {
    marked[d] = 1;
  }

  GeneratedDataset out;
  out.records.reserve(cfg.target_size);
  out.provenance.reserve(cfg.target_size);
  std::size_t dup_index = 0;
  for (std::size_t c = 0; c < sources.size(); ++c) {
    const auto& source = clean[sources[c]];
    for (std::size_t k = 0; k < sizes[c]; ++k) {
      const auto tid = static_cast<Tid>(out.records.size());
      Provenance p;
      p.tid = tid;
      p.cluster_id = static_cast<std::int64_t>(c);
      p.source = sources[c];
      p.clean = k == 0;
      std::string text = source;
      if (!p.clean) {
        p.marked = marked[dup_index++] != 0;
      }
      if (p.marked) {
        CounterRng rng(cfg.seed, static_cast<std::uint64_t>(tid));
        if (!cfg.dictionary.empty() && rng.bernoulli(cfg.pct_abbreviation / 100.0)) {
          text = inject_abbreviation(text, cfg.dictionary, rng, &p.errors);
        }
        text = inject_token_swap(text, cfg.pct_token_swap, rng, cfg.arbitrary_swap, &p.errors);
        double extent = cfg.extent;
        const auto len = split_code_points(text).size();
        if (!cfg.exact_extent && extent > 0.0 && len > 0) {
          // Between one edit and the full extent.
          const auto most = std::max<std::uint64_t>(
              1, static_cast<std::uint64_t>(std::llround(extent / 100.0 * static_cast<double>(len))));
          extent = 100.0 * static_cast<double>(1 + rng.below(most)) / static_cast<double>(len);
        }
        text = inject_edit_errors(text, extent, rng, &p.errors);
      }
      out.records.push_back(Record{tid, std::move(text), static_cast<std::int64_t>(c)});
      out.provenance.push_back(std::move(p));
    }
  }
  return out;
}

std::string format_provenance(std::span<const Provenance> log) {
  std::string out;
  for (const auto& p : log) {
    nlohmann::json j = {{"tid", p.tid},         {"cluster_id", p.cluster_id},
                        {"source", p.source},   {"clean", p.clean},
                        {"marked", p.marked},   {"errors", p.errors}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace approxsel
