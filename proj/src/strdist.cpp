#include "approxsel/strdist.hpp"

#include <algorithm>
#include <numeric>

#include "approxsel/error.hpp"

namespace approxsel {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) {
    std::swap(a, b);
  }
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double edit_similarity(std::string_view a, std::string_view b) {
  const auto longest = std::max(a.size(), b.size());
  if (longest == 0) {
    return 1.0;
  }
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

double jaro(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) {
    return 1.0;
  }
  if (a.empty() || b.empty()) {
    return 0.0;
  }
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;
  std::vector<char> a_match(a.size(), 0);
  std::vector<char> b_match(b.size(), 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!b_match[j] && a[i] == b[j]) {
        a_match[i] = b_match[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) {
    return 0.0;
  }
  std::size_t half_transpositions = 0;
  for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
    if (!a_match[i]) {
      continue;
    }
    while (!b_match[j]) {
      ++j;
    }
    half_transpositions += a[i] != b[j];
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions) / 2.0;
  return (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) + (m - t) / m) /
         3.0;
}

double jaro_winkler(std::string_view a, std::string_view b) {
  const double j = jaro(a, b);
  std::size_t prefix = 0;
  while (prefix < 4 && prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) {
    ++prefix;
  }
  return j + static_cast<double>(prefix) * 0.1 * (1.0 - j);
}

double set_jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::size_t inter = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const auto uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double ges_transformation_cost(std::span<const std::string> query,
                               std::span<const std::string> tuple, const WordWeight& weight,
                               double c_ins) {
  const auto n = query.size();
  const auto m = tuple.size();
  std::vector<double> wq(n);
  std::vector<double> wd(m);
  for (std::size_t i = 0; i < n; ++i) wq[i] = weight(query[i]);
  for (std::size_t j = 0; j < m; ++j) wd[j] = weight(tuple[j]);

  // cost[i][j]: first i query words into first j tuple words.
  std::vector<double> prev(m + 1, 0.0);
  std::vector<double> cur(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) {
    prev[j] = prev[j - 1] + c_ins * wd[j - 1];
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + wq[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      const double replace =
          prev[j - 1] + (1.0 - edit_similarity(query[i - 1], tuple[j - 1])) * wq[i - 1];
      cur[j] = std::min({prev[j] + wq[i - 1], cur[j - 1] + c_ins * wd[j - 1], replace});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double ges_exact(std::string_view query, std::string_view tuple, const WordWeight& weight,
                 double c_ins, bool case_fold) {
  const auto qw = word_tokenize(query, case_fold);
  const auto dw = word_tokenize(tuple, case_fold);
  double wt = 0.0;
  for (const auto& w : qw) {
    wt += weight(w);
  }
  if (!(wt > 0.0)) {
    return 0.0;
  }
  const double tc = ges_transformation_cost(qw, dw, weight, c_ins);
  return 1.0 - std::min(tc / wt, 1.0);
}

double ges_word_term_uncapped(double sim, int q) {
  const double qd = static_cast<double>(q);
  return (2.0 / qd) * sim + (1.0 - 1.0 / qd);
}

double ges_word_term(double sim, int q) { return std::min(1.0, ges_word_term_uncapped(sim, q)); }

}  // namespace approxsel
