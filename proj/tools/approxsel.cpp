// approxsel command-line driver: gen, index, query, bench, emit-sql, names.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "approxsel/datagen.hpp"
#include "approxsel/error.hpp"
#include "approxsel/eval.hpp"
#include "approxsel/index.hpp"
#include "approxsel/predicates.hpp"
#include "approxsel/sqlgen.hpp"
#include "approxsel/tsv.hpp"

namespace fs = std::filesystem;
using namespace approxsel;

namespace {

// Accepts TOML (CLI11's native format) or a JSON object whose nested objects
// name subcommands, e.g. {"bench": {"n-queries": 200}}.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream buffer;
    buffer << input.rdbuf();
    const auto text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream toml(text);
      return CLI::ConfigTOML::from_config(toml);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void flatten(const nlohmann::json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto sub = parents;
        sub.push_back(key);
        flatten(value, sub, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) {
          item.inputs.push_back(scalar(v));
        }
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

// 15 significant digits hide last-bit noise, so a self-match prints 1.
std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) {
    return *seed;
  }
  std::random_device rd;
  const auto s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << "\n";
  return s;
}

void add_query_params(CLI::App* cmd, QueryParams& qp, std::string& scheme) {
  cmd->add_option("--k3", qp.k3, "BM25 query term saturation")->capture_default_str();
  cmd->add_option("--scheme", scheme, "overlap weight scheme for weighted_match/weighted_jaccard")
      ->check(CLI::IsMember({"rs", "idf"}))
      ->capture_default_str();
  cmd->add_option("--edit-theta", qp.edit_theta, "edit similarity threshold")
      ->capture_default_str();
  cmd->add_option("--ges-theta", qp.ges_theta, "GES filter threshold")->capture_default_str();
  cmd->add_option("--c-ins", qp.c_ins, "GES insertion cost factor")->capture_default_str();
  cmd->add_option("--soft-theta", qp.soft_theta, "SoftTFIDF Jaro-Winkler threshold")
      ->capture_default_str();
}

WeightScheme parse_scheme(const std::string& s) {
  return s == "idf" ? WeightScheme::idf : WeightScheme::rs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate string selection: indexing, ranking, benchmarking, SQL emission"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonOrTomlConfig>());
  app.set_config("--config", "", "TOML or JSON file with option defaults (flags win)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a dirty dataset with ground-truth clusters");
  std::string clean_path;
  fs::path gen_out;
  GeneratorConfig gcfg;
  std::string dist = "uniform";
  std::string abbr_dict;
  std::optional<std::uint64_t> gen_seed;
  bool gen_overwrite = false;
  gen->add_option("--clean", clean_path, "clean strings, one per line")->required();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--size", gcfg.target_size, "total tuples")->capture_default_str();
  gen->add_option("--num-clean", gcfg.num_clean, "clean sources (clusters)")->capture_default_str();
  gen->add_option("--dist", dist, "cluster size distribution")
      ->check(CLI::IsMember({"uniform", "zipf", "zipfian", "poisson"}))
      ->capture_default_str();
  gen->add_option("--zipf-s", gcfg.zipf_s, "zipf exponent")->capture_default_str();
  gen->add_option("--lambda", gcfg.poisson_lambda, "poisson mean (0: size / num-clean)")
      ->capture_default_str();
  gen->add_option("--err-dup", gcfg.pct_erroneous, "percent of duplicates made erroneous")
      ->capture_default_str();
  gen->add_option("--extent", gcfg.extent, "maximum percent of characters edited per tuple")
      ->capture_default_str();
  gen->add_flag("--exact-extent", gcfg.exact_extent, "edit exactly --extent percent of every tuple");
  gen->add_option("--token-swap", gcfg.pct_token_swap, "percent of word pairs swapped")
      ->capture_default_str();
  gen->add_option("--abbr", gcfg.pct_abbreviation, "percent chance of an abbreviation error")
      ->capture_default_str();
  gen->add_option("--abbr-dict", abbr_dict, "abbreviation TSV replacing the built-in table");
  gen->add_flag("--arbitrary-swap", gcfg.arbitrary_swap, "swap any word pair, not only adjacent");
  gen->add_option("--seed", gen_seed, "random seed (printed when omitted)");
  gen->add_flag("--overwrite", gen_overwrite, "replace an existing output directory");

  // index
  auto* idx = app.add_subcommand("index", "build and persist an index");
  fs::path idx_in;
  fs::path idx_out;
  IndexConfig icfg;
  std::string idx_preds = "all";
  std::string pad = "$";
  bool idx_overwrite = false;
  idx->add_option("--in", idx_in, "relation TSV")->required();
  idx->add_option("--out", idx_out, "index directory")->required();
  idx->add_option("--q", icfg.tokenizer.q, "q-gram length")->capture_default_str();
  idx->add_option("--padded", icfg.tokenizer.padded, "pad q-grams at word boundaries")
      ->capture_default_str();
  idx->add_option("--case-fold", icfg.tokenizer.case_fold, "ASCII case folding")
      ->capture_default_str();
  idx->add_option("--pad", pad, "pad symbol")->capture_default_str();
  idx->add_option("--predicates", idx_preds, "comma-separated predicates or 'all'")
      ->capture_default_str();
  idx->add_option("--prune-rate", icfg.params.prune_rate, "IDF pruning rate in [0, 1)")
      ->capture_default_str();
  idx->add_option("--k1", icfg.params.k1, "BM25 k1")->capture_default_str();
  idx->add_option("--b", icfg.params.b, "BM25 b")->capture_default_str();
  idx->add_option("--a0", icfg.params.a0, "HMM a0")->capture_default_str();
  idx->add_option("--minhash-size", icfg.params.minhash_size, "min-hash signature size")
      ->capture_default_str();
  idx->add_option("--minhash-seed", icfg.params.minhash_seed, "min-hash family seed")
      ->capture_default_str();
  idx->add_flag("--overwrite", idx_overwrite, "replace an existing index directory");

  // query
  auto* qry = app.add_subcommand("query", "rank the indexed tuples against one query string");
  fs::path q_index;
  std::string q_pred;
  std::string q_text;
  std::optional<std::size_t> q_top;
  std::optional<double> q_min;
  QueryParams qparams;
  std::string q_scheme = "rs";
  qry->add_option("--index", q_index, "index directory")->required();
  qry->add_option("--predicate", q_pred, "predicate name")->required();
  qry->add_option("--query", q_text, "query string")->required();
  auto* top_opt = qry->add_option("--top-k", q_top, "keep the first K rows");
  qry->add_option("--min-score", q_min, "keep rows scoring at least S")->excludes(top_opt);
  add_query_params(qry, qparams, q_scheme);

  // bench
  auto* bench = app.add_subcommand("bench", "measure MAP and max-F1 over sampled queries");
  fs::path b_index;
  std::string b_dataset;
  std::string b_preds = "all";
  BenchmarkOptions bopts;
  std::optional<std::uint64_t> b_seed;
  std::string b_report;
  std::string b_csv;
  std::string b_scheme = "rs";
  bench->add_option("--index", b_index, "index directory")->required();
  bench->add_option("--dataset", b_dataset, "TSV whose cluster_id column defines relevance");
  bench->add_option("--predicates", b_preds, "comma-separated predicates or 'all'")
      ->capture_default_str();
  bench->add_option("--n-queries", bopts.n_queries, "queries sampled")->capture_default_str();
  bench->add_option("--seed", b_seed, "random seed (printed when omitted)");
  bench->add_option("--jobs", bopts.jobs, "worker threads")->capture_default_str();
  bench->add_option("--report", b_report, "JSON report path");
  bench->add_option("--csv", b_csv, "CSV summary path");
  add_query_params(bench, bopts.params, b_scheme);

  // emit-sql
  auto* sql = app.add_subcommand("emit-sql", "print the SQL realization of a predicate");
  std::string s_name;
  std::string s_phase = "query";
  std::string s_out;
  std::string s_pad = "$";
  bool s_list = false;
  SqlTemplateParams sp;
  auto* name_opt = sql->add_option("--predicate", s_name, "predicate or tokenizer template name");
  sql->add_flag("--list", s_list, "list template names")->excludes(name_opt);
  sql->add_option("--phase", s_phase, "preprocess or query")
      ->check(CLI::IsMember({"preprocess", "query"}))
      ->capture_default_str();
  sql->add_option("--out", s_out, "output file (default stdout)");
  sql->add_option("--q", sp.q, "q-gram length")->capture_default_str();
  sql->add_option("--padded", sp.padded, "padded q-grams")->capture_default_str();
  sql->add_option("--case-fold", sp.case_fold, "fold case")->capture_default_str();
  sql->add_option("--pad", s_pad, "pad symbol")->capture_default_str();
  sql->add_option("--max-str-size", sp.max_str_size, "INTEGERS table bound")
      ->capture_default_str();
  sql->add_option("--k1", sp.k1, "BM25 k1")->capture_default_str();
  sql->add_option("--k3", sp.k3, "BM25 k3")->capture_default_str();
  sql->add_option("--b", sp.b, "BM25 b")->capture_default_str();
  sql->add_option("--a0", sp.a0, "HMM a0")->capture_default_str();
  sql->add_option("--ges-theta", sp.ges_theta, "GES filter threshold")->capture_default_str();
  sql->add_option("--soft-theta", sp.soft_theta, "SoftTFIDF threshold")->capture_default_str();
  sql->add_option("--edit-theta", sp.edit_theta, "edit threshold")->capture_default_str();
  sql->add_option("--c-ins", sp.c_ins, "GES insertion cost factor")->capture_default_str();
  sql->add_option("--minhash-size", sp.minhash_size, "min-hash signature size")
      ->capture_default_str();
  sql->add_option("--table", sp.table, "base table")->capture_default_str();
  sql->add_option("--tid-column", sp.tid_column, "tid column")->capture_default_str();
  sql->add_option("--string-column", sp.string_column, "string column")->capture_default_str();

  // names
  auto* names = app.add_subcommand("names", "print the built-in synthetic company-name pool");
  std::size_t n_count = 2139;
  std::uint64_t n_seed = 2139;
  std::string n_out;
  names->add_option("--count", n_count, "names to print")->capture_default_str();
  names->add_option("--seed", n_seed, "pool seed")->capture_default_str();
  names->add_option("--out", n_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& c : msg) {
      c = c == '\n' ? ' ' : c;
    }
    std::cerr << "error: usage: " << msg << "\n";
    return 2;
  }

  try {
    if (*gen) {
      gcfg.distribution = parse_distribution(dist);
      gcfg.seed = resolve_seed(gen_seed);
      if (!abbr_dict.empty()) {
        gcfg.dictionary = AbbreviationDictionary(read_pairs(abbr_dict));
      }
      gcfg.validate();
      const auto clean = read_lines(clean_path);
      const auto data = generate(clean, gcfg);
      nlohmann::json meta = {{"size", gcfg.target_size},
                             {"num-clean", gcfg.num_clean},
                             {"dist", distribution_name(gcfg.distribution)},
                             {"zipf-s", gcfg.zipf_s},
                             {"lambda", gcfg.poisson_lambda},
                             {"err-dup", gcfg.pct_erroneous},
                             {"extent", gcfg.extent},
                             {"exact-extent", gcfg.exact_extent},
                             {"token-swap", gcfg.pct_token_swap},
                             {"abbr", gcfg.pct_abbreviation},
                             {"arbitrary-swap", gcfg.arbitrary_swap},
                             {"seed", gcfg.seed},
                             {"clean", clean_path}};
      write_directory_atomic(gen_out, gen_overwrite, [&](const fs::path& dir) {
        write_file_atomic(dir / "dataset.tsv", format_records(data.records));
        write_file_atomic(dir / "provenance.jsonl", format_provenance(data.provenance));
        write_file_atomic(dir / "config.json", meta.dump(2) + "\n");
      });
      std::cerr << "wrote " << data.records.size() << " tuples to " << gen_out.string() << "\n";
    } else if (*idx) {
      if (pad.size() != 1) {
        fail("invalid_argument", "--pad must be a single character");
      }
      icfg.tokenizer.pad = pad[0];
      icfg.predicates = parse_predicate_list(idx_preds);
      icfg.tokenizer.validate();
      icfg.params.validate();
      auto records = read_records(idx_in);
      const auto index = build_index(std::move(records), icfg);
      save_index(index, idx_out, idx_overwrite);
      if (index.build_info().pad_collisions > 0) {
        std::cerr << "warning: " << index.build_info().pad_collisions
                  << " tuples contain the pad symbol\n";
      }
    } else if (*qry) {
      const auto pred = parse_predicate(q_pred);
      if (!pred) {
        fail("unknown_predicate",
             "unknown predicate '" + q_pred + "' (valid: " + predicate_names_joined() + ")");
      }
      qparams.overlap_scheme = parse_scheme(q_scheme);
      qparams.validate();
      const auto index = load_index(q_index);
      const auto result =
          approximate_select(index, *pred, q_text, qparams, SelectOptions{q_top, q_min});
      std::string out = "tid\tscore\n";
      for (const auto& row : result.rows) {
        out += std::to_string(row.tid) + "\t" + format_score(row.score) + "\n";
      }
      std::cout << out;
    } else if (*bench) {
      const auto preds = parse_predicate_list(b_preds);
      bopts.seed = resolve_seed(b_seed);
      bopts.params.overlap_scheme = parse_scheme(b_scheme);
      bopts.params.validate();
      const auto index = load_index(b_index);
      std::vector<Record> labels;
      if (!b_dataset.empty()) {
        labels = read_records(b_dataset);
        bopts.labels = labels;
      }
      const auto report = run_benchmark(index, preds, bopts);
      if (report.clipped) {
        std::cerr << "warning: only " << report.queries.size() << " tuples, n-queries clipped from "
                  << report.requested_queries << "\n";
      }
      if (!b_report.empty()) {
        write_file_atomic(b_report, report.to_json());
      }
      if (!b_csv.empty()) {
        write_file_atomic(b_csv, report.to_csv());
      }
      std::cout << report.to_table();
    } else if (*sql) {
      if (s_list) {
        for (const auto& n : sql_template_names()) {
          std::cout << n << "\n";
        }
        return 0;
      }
      if (s_name.empty()) {
        fail("usage", "--predicate or --list is required");
      }
      if (s_pad.size() != 1) {
        fail("invalid_argument", "--pad must be a single character");
      }
      sp.pad = s_pad[0];
      const auto text = emit_sql(s_name, parse_sql_phase(s_phase), sp);
      if (s_out.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(s_out, text);
      }
    } else if (*names) {
      std::string text;
      for (const auto& n : company_names(n_count, n_seed)) {
        text += n + "\n";
      }
      if (n_out.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(n_out, text);
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
