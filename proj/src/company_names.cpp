#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "approxsel/datagen.hpp"

namespace approxsel {

namespace {

constexpr std::string_view kConsonants = "bcdfghjklmnprstvwz";
constexpr std::string_view kVowels = "aeiou";

constexpr std::array kQualifiers = {
    "American", "Atlantic", "Advanced", "Allied",   "Central",  "Continental", "Digital",
    "First",    "General",  "Global",   "Great",    "International", "Metro",  "National",
    "Northern", "Pacific",  "Pioneer",  "Premier",  "Southern", "Standard",    "United",
    "Western",  "Royal",    "Summit",
};

constexpr std::array kIndustries = {
    "Aerospace", "Airlines",     "Analytics",  "Apparel",      "Bancorp",     "Biosciences",
    "Brands",    "Capital",      "Chemicals",  "Communications", "Consulting", "Devices",
    "Electric",  "Electronics",  "Energy",     "Engineering",  "Entertainment", "Financial",
    "Foods",     "Healthcare",   "Holdings",   "Hotels",       "Industries",  "Insurance",
    "Logistics", "Manufacturing", "Media",     "Minerals",     "Motors",      "Networks",
    "Partners",  "Pharmaceuticals", "Products", "Realty",       "Resources",   "Semiconductor",
    "Services",  "Software",     "Solutions",  "Steel",        "Systems",     "Technologies",
    "Telecom",   "Therapeutics", "Trading",    "Transport",    "Ventures",    "Wireless",
};

// Mostly dictionary words so abbreviation errors have something to act on.
constexpr std::array kSuffixes = {"Inc.",    "Incorporated", "Corp.", "Corporation", "Co.",
                                  "Company", "Inc.",         "Corp.", "Ltd.",        "Group"};

template <typename A>
const char* pick(const A& arr, CounterRng& rng) {
  return arr[rng.below(arr.size())];
}

char letter(std::string_view set, CounterRng& rng) { return set[rng.below(set.size())]; }

// An invented consonant-vowel brand such as "Kunazbo".
std::string brand(CounterRng& rng) {
  const int syllables = rng.below(3) == 0 ? 3 : 2;
  std::string w;
  for (int i = 0; i < syllables; ++i) {
    w += letter(kConsonants, rng);
    w += letter(kVowels, rng);
    if (rng.bernoulli(0.3)) {
      w += letter(kConsonants, rng);
    }
  }
  w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string one_name(CounterRng& rng) {
  std::string name = brand(rng);
  if (rng.bernoulli(0.4)) {
    name += ' ';
    name += rng.bernoulli(0.5) ? std::string(pick(kQualifiers, rng)) : brand(rng);
  }
  if (rng.bernoulli(0.6)) {
    name += ' ';
    name += pick(kIndustries, rng);
  }
  if (rng.bernoulli(0.9)) {
    name += ' ';
    name += pick(kSuffixes, rng);
  }
  return name;
}

}  // namespace

std::vector<std::string> company_names(std::size_t count, std::uint64_t seed) {
  std::vector<std::string> out;
  out.reserve(count);
  std::unordered_set<std::string> seen;
  for (std::uint64_t stream = 0; out.size() < count; ++stream) {
    CounterRng rng(seed, stream);
    auto name = one_name(rng);
    if (seen.insert(name).second) {
      out.push_back(std::move(name));
    }
  }
  return out;
}

}  // namespace approxsel
