#pragma once

#include <string>
#include <vector>

#include "approxsel/types.hpp"

namespace fixtures {

struct Fixture {
  std::string name;
  std::vector<approxsel::Record> records;
  std::vector<std::string> queries;
};

inline std::vector<Fixture> all() {
  return {
      {"companies",
       {{1, "AT&T Incorporated", {}},
        {2, "AT&T Inc.", {}},
        {3, "IBM Corporation", {}},
        {4, "IBM Corp.", {}},
        {5, "Beijing Hotel", {}},
        {6, "Hotel Beijing", {}},
        {7, "Bejing Hotl", {}}},
       {"AT&T Incorporated", "Beijing Hotel", "ibm corp", "Hotel Bejing"}},
      {"toy",
       {{10, "db lab", {}}, {20, "lab db", {}}, {30, "data base", {}}, {40, "dbms", {}}},
       {"db lab", "dblab", "base"}},
      {"repeats",
       {{1, "aa aa", {}}, {2, "aaa", {}}, {3, "ab ab ab", {}}, {4, "ba", {}}, {5, "abab", {}}},
       {"aa", "abab ab", "b"}},
  };
}

}  // namespace fixtures
