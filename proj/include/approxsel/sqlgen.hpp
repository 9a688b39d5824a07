#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace approxsel {

enum class SqlPhase { preprocess, query };

std::string_view sql_phase_name(SqlPhase p) noexcept;
SqlPhase parse_sql_phase(std::string_view name);

struct SqlTemplateParams {
  int q = 2;
  bool padded = true;
  bool case_fold = true;
  char pad = '$';
  int max_str_size = 255;
  double k1 = 1.5;
  double k3 = 8.0;
  double b = 0.675;
  double a0 = 0.2;
  double ges_theta = 0.8;
  double soft_theta = 0.8;
  double edit_theta = 0.7;
  double c_ins = 0.5;
  int minhash_size = 5;
  std::string table = "BASE_TABLE";
  std::string tid_column = "tid";
  std::string string_column = "string";

  void validate() const;
};

// Predicate names plus the tokenization statements
// (tokenize_qgrams, tokenize_words, tokenize_word_qgrams).
std::vector<std::string> sql_template_names();

// Deterministic SQL text for one phase. Throws "unknown_template" with the list
// of valid names.
std::string emit_sql(std::string_view name, SqlPhase phase, const SqlTemplateParams& params = {});

// Shortest decimal text that reads back as the same double.
std::string sql_number(double v);

}  // namespace approxsel
