#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "approxsel/error.hpp"
#include "approxsel/index.hpp"
#include "approxsel/tsv.hpp"

namespace approxsel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'A', 'S', 'E', 'L', 'C', 'O', 'L', '1'};
constexpr std::string_view kFormat = "approxsel-index";

enum class DType : std::uint32_t { u8 = 1, u32 = 2, u64 = 3, i64 = 4, f64 = 5 };

template <class T>
constexpr DType dtype_of() {
  if constexpr (std::is_same_v<T, std::uint8_t>) return DType::u8;
  if constexpr (std::is_same_v<T, std::uint32_t>) return DType::u32;
  if constexpr (std::is_same_v<T, std::uint64_t>) return DType::u64;
  if constexpr (std::is_same_v<T, std::int64_t>) return DType::i64;
  if constexpr (std::is_same_v<T, double>) return DType::f64;
}

template <class T>
void put_le(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
  auto bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(bits & 0xff));
    if constexpr (sizeof(T) > 1) {
      bits >>= 8;
    }
  }
}

template <class T>
T get_le(const char* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                               std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint8_t>>;
  U bits = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) {
    bits = static_cast<U>((bits << 8) | static_cast<unsigned char>(p[i]));
  }
  return std::bit_cast<T>(bits);
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {}

  template <class T>
  void column(const std::string& name, std::span<const T> values) {
    std::string buf(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(dtype_of<T>()));
    put_le<std::uint32_t>(buf, 0);
    put_le<std::uint64_t>(buf, values.size());
    buf.reserve(buf.size() + values.size() * sizeof(T));
    for (const auto& v : values) {
      put_le<T>(buf, v);
    }
    std::ofstream out(dir_ / (name + ".bin"), std::ios::binary);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) {
      fail("io", "failed to write column " + name);
    }
    files_[name] = {{"dtype", static_cast<int>(dtype_of<T>())}, {"count", values.size()}};
  }

  template <class T>
  void column(const std::string& name, const std::vector<T>& values) {
    column<T>(name, std::span<const T>(values));
  }

  void strings(const std::string& name, std::span<const std::string> values) {
    std::vector<std::uint8_t> bytes;
    std::vector<std::uint64_t> offsets{0};
    for (const auto& s : values) {
      bytes.insert(bytes.end(), s.begin(), s.end());
      offsets.push_back(bytes.size());
    }
    column(name + ".bytes", bytes);
    column(name + ".offsets", offsets);
  }

  void table(const std::string& prefix, const TokenTable& t) {
    strings(prefix + ".vocab", t.vocab.tokens());
    column(prefix + ".offsets", t.offsets);
    column(prefix + ".token", t.token);
    column(prefix + ".tf", t.tf);
  }

  void corpus(const std::string& prefix, const Corpus& c) {
    column(prefix + ".tids", c.tids);
    table(prefix, c.table);
    column(prefix + ".dl", c.tuples.dl);
    const std::vector<std::uint64_t> scalars{c.stats.num_tuples, c.stats.total_tokens};
    column(prefix + ".scalars", scalars);
    column(prefix + ".avgdl", std::vector<double>{c.stats.avgdl});
    std::vector<std::uint32_t> df;
    std::vector<std::uint64_t> cf;
    std::vector<double> idf;
    std::vector<double> rs;
    for (const auto& ts : c.stats.tokens) {
      df.push_back(ts.df);
      cf.push_back(ts.cf);
      idf.push_back(ts.idf);
      rs.push_back(ts.rs);
    }
    column(prefix + ".df", df);
    column(prefix + ".cf", cf);
    column(prefix + ".idf", idf);
    column(prefix + ".rs", rs);
  }

  const json& files() const { return files_; }

 private:
  fs::path dir_;
  json files_ = json::object();
};

class Reader {
 public:
  Reader(fs::path dir, const json& files) : dir_(std::move(dir)), files_(files) {}

  template <class T>
  std::vector<T> column(const std::string& name) const {
    const auto path = dir_ / (name + ".bin");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      fail("io", "missing column file " + path.string());
    }
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    constexpr std::size_t header = sizeof(kMagic) + 4 + 4 + 8;
    if (buf.size() < header || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
      fail("format", "corrupted column header in " + path.string());
    }
    const auto dtype = get_le<std::uint32_t>(buf.data() + 8);
    const auto count = get_le<std::uint64_t>(buf.data() + 16);
    if (dtype != static_cast<std::uint32_t>(dtype_of<T>())) {
      fail("format", "unexpected column type in " + path.string());
    }
    if (buf.size() != header + count * sizeof(T)) {
      fail("format", "truncated or oversized column " + path.string());
    }
    if (auto it = files_.find(name); it == files_.end() || (*it)["count"] != count) {
      fail("format", "column " + name + " does not match the manifest");
    }
    std::vector<T> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = get_le<T>(buf.data() + header + i * sizeof(T));
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& name) const {
    const auto bytes = column<std::uint8_t>(name + ".bytes");
    const auto offsets = column<std::uint64_t>(name + ".offsets");
    std::vector<std::string> out;
    if (offsets.empty() || offsets.back() != bytes.size()) {
      fail("format", "inconsistent string column " + name);
    }
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
      if (offsets[i] > offsets[i + 1]) {
        fail("format", "inconsistent string column " + name);
      }
      out.emplace_back(reinterpret_cast<const char*>(bytes.data()) + offsets[i],
                       offsets[i + 1] - offsets[i]);
    }
    return out;
  }

  TokenTable table(const std::string& prefix) const {
    TokenTable t;
    for (const auto& s : strings(prefix + ".vocab")) {
      t.vocab.intern(s);
    }
    t.offsets = column<std::uint64_t>(prefix + ".offsets");
    t.token = column<TokenId>(prefix + ".token");
    t.tf = column<std::uint32_t>(prefix + ".tf");
    if (t.offsets.empty() || t.offsets.front() != 0 || t.offsets.back() != t.token.size() ||
        t.tf.size() != t.token.size() || !std::is_sorted(t.offsets.begin(), t.offsets.end())) {
      fail("format", "inconsistent token table " + prefix);
    }
    for (auto tok : t.token) {
      if (tok >= t.vocab.size()) {
        fail("format", "token id out of range in " + prefix);
      }
    }
    return t;
  }

  Corpus corpus(const std::string& prefix) const {
    Corpus c;
    c.tids = column<Tid>(prefix + ".tids");
    c.table = table(prefix);
    c.tuples.dl = column<std::uint32_t>(prefix + ".dl");
    const auto scalars = column<std::uint64_t>(prefix + ".scalars");
    const auto avgdl = column<double>(prefix + ".avgdl");
    if (scalars.size() != 2 || avgdl.size() != 1) {
      fail("format", "bad scalar block in " + prefix);
    }
    c.stats.num_tuples = scalars[0];
    c.stats.total_tokens = scalars[1];
    c.stats.avgdl = avgdl[0];
    const auto df = column<std::uint32_t>(prefix + ".df");
    const auto cf = column<std::uint64_t>(prefix + ".cf");
    const auto idf = column<double>(prefix + ".idf");
    const auto rs = column<double>(prefix + ".rs");
    const auto vocab = c.table.vocab.size();
    if (df.size() != vocab || cf.size() != vocab || idf.size() != vocab || rs.size() != vocab ||
        c.tids.size() != c.table.num_docs() || c.tuples.dl.size() != c.table.num_docs()) {
      fail("format", "inconsistent statistics in " + prefix);
    }
    for (std::size_t i = 0; i < vocab; ++i) {
      c.stats.tokens.push_back({df[i], cf[i], idf[i], rs[i]});
    }
    return c;
  }

 private:
  fs::path dir_;
  const json& files_;
};

json tokenizer_json(const TokenizerConfig& c) {
  return {{"q", c.q}, {"padded", c.padded}, {"case_fold", c.case_fold}, {"pad", std::string(1, c.pad)}};
}

json params_json(const BuildParams& p) {
  return {{"k1", p.k1},
          {"b", p.b},
          {"a0", p.a0},
          {"minhash_size", p.minhash_size},
          {"minhash_seed", p.minhash_seed},
          {"prune_rate", p.prune_rate}};
}

void write_tables(const Index& index, const fs::path& dir) {
  const auto& t = index.tables();
  Writer w(dir);

  std::vector<Tid> tids;
  std::vector<std::int64_t> clusters;
  std::vector<std::uint8_t> has_cluster;
  std::vector<std::string> texts;
  for (const auto& r : t.records) {
    tids.push_back(r.tid);
    clusters.push_back(r.cluster_id.value_or(0));
    has_cluster.push_back(r.cluster_id.has_value());
    texts.push_back(r.text);
  }
  w.column("records.tid", tids);
  w.column("records.cluster", clusters);
  w.column("records.has_cluster", has_cluster);
  w.strings("records.text", texts);

  w.corpus("grams", t.grams);
  w.strings("grams.pruned", t.pruned_tokens);
  w.column("grams.rs_sum", t.rs_sum);
  w.column("grams.idf_sum", t.idf_sum);

  json tables = json::array();
  if (t.cosine) {
    w.column("weights.cosine", t.cosine->weight);
    tables.push_back("cosine");
  }
  if (t.bm25) {
    w.column("weights.bm25", t.bm25->weight);
    tables.push_back("bm25");
  }
  if (t.hmm) {
    w.column("weights.hmm", t.hmm->weight);
    tables.push_back("hmm");
  }
  if (t.lm) {
    w.column("lm.pm", t.lm->pm);
    w.column("lm.cfcs", t.lm->cfcs);
    w.column("lm.sumcompm", t.lm->sumcompm);
    tables.push_back("lm");
  }
  if (t.edit) {
    w.table("edit", t.edit->grams);
    w.column("edit.length", t.edit->length);
    tables.push_back("edit");
  }
  if (t.words) {
    w.corpus("words", t.words->corpus);
    w.column("words.avg_idf", std::vector<double>{t.words->avg_idf});
    w.column("words.cosine", t.words->cosine.weight);
    w.table("words.qgrams", t.words->qgrams);
    tables.push_back("words");
  }
  if (t.minhash) {
    w.column("minhash.signatures", t.minhash->signatures);
    tables.push_back("minhash");
  }

  json predicates = json::array();
  for (auto p : t.config.predicates) {
    predicates.push_back(std::string(predicate_name(p)));
  }
  json seconds = json::object();
  for (const auto& [k, v] : index.build_info().seconds) {
    seconds[k] = v;
  }
  json manifest = {
      {"format", kFormat},
      {"version", index_format_version},
      {"byte_order", "little"},
      {"tokenizer", tokenizer_json(t.config.tokenizer)},
      {"params", params_json(t.config.params)},
      {"predicates", predicates},
      {"prune_threshold", t.prune_threshold},
      {"num_records", t.records.size()},
      {"tables", tables},
      {"build_seconds", seconds},
      {"pad_collisions", index.build_info().pad_collisions},
      {"files", w.files()},
  };
  if (t.minhash) {
    manifest["minhash"] = {{"size", t.minhash->size}, {"seed", t.minhash->seed}};
  }
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) {
    fail("io", "failed to write manifest");
  }
}


}  // namespace

void save_index(const Index& index, const fs::path& dir, bool overwrite) {
  write_directory_atomic(dir, overwrite, [&](const fs::path& tmp) { write_tables(index, tmp); });
}

Index load_index(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) {
    fail("io", "no manifest.json in " + dir.string());
  }
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    fail("format", "corrupted index manifest: " + std::string(e.what()));
  }
  if (!m.is_object() || m.value("format", "") != kFormat) {
    fail("format", "not an approxsel index (bad manifest header)");
  }
  if (!m.contains("version") || !m["version"].is_number_integer()) {
    fail("format", "manifest has no version");
  }
  if (m["version"].get<int>() != index_format_version) {
    fail("version", "unsupported index format version " + m["version"].dump() + " (expected " +
                        std::to_string(index_format_version) + ")");
  }

  IndexTables t;
  BuildInfo info;
  try {
    const auto& tk = m.at("tokenizer");
    t.config.tokenizer.q = tk.at("q").get<int>();
    t.config.tokenizer.padded = tk.at("padded").get<bool>();
    t.config.tokenizer.case_fold = tk.at("case_fold").get<bool>();
    const auto pad = tk.at("pad").get<std::string>();
    if (pad.size() != 1) {
      fail("format", "pad must be a single character");
    }
    t.config.tokenizer.pad = pad[0];
    const auto& p = m.at("params");
    t.config.params.k1 = p.at("k1").get<double>();
    t.config.params.b = p.at("b").get<double>();
    t.config.params.a0 = p.at("a0").get<double>();
    t.config.params.minhash_size = p.at("minhash_size").get<int>();
    t.config.params.minhash_seed = p.at("minhash_seed").get<std::uint64_t>();
    t.config.params.prune_rate = p.at("prune_rate").get<double>();
    t.config.predicates.clear();
    for (const auto& name : m.at("predicates")) {
      const auto pred = parse_predicate(name.get<std::string>());
      if (!pred) {
        fail("format", "unknown predicate in manifest: " + name.dump());
      }
      t.config.predicates.push_back(*pred);
    }
    t.prune_threshold = m.at("prune_threshold").get<double>();
    const auto build_seconds = m.value("build_seconds", json::object());
    for (const auto& [k, v] : build_seconds.items()) {
      info.seconds[k] = v.get<double>();
    }
    info.pad_collisions = m.value("pad_collisions", std::size_t{0});
  } catch (const json::exception& e) {
    fail("format", "malformed manifest: " + std::string(e.what()));
  }

  const auto& files = m.at("files");
  const Reader r(dir, files);
  const auto tids = r.column<Tid>("records.tid");
  const auto clusters = r.column<std::int64_t>("records.cluster");
  const auto has_cluster = r.column<std::uint8_t>("records.has_cluster");
  auto texts = r.strings("records.text");
  if (clusters.size() != tids.size() || has_cluster.size() != tids.size() ||
      texts.size() != tids.size()) {
    fail("format", "inconsistent record columns");
  }
  for (std::size_t i = 0; i < tids.size(); ++i) {
    Record rec{tids[i], std::move(texts[i]), std::nullopt};
    if (has_cluster[i]) {
      rec.cluster_id = clusters[i];
    }
    t.records.push_back(std::move(rec));
  }

  t.grams = r.corpus("grams");
  t.pruned_tokens = r.strings("grams.pruned");
  t.rs_sum = r.column<double>("grams.rs_sum");
  t.idf_sum = r.column<double>("grams.idf_sum");
  const auto rows = t.grams.table.num_rows();
  auto check_rows = [&](std::size_t n, const char* what) {
    if (n != rows) {
      fail("format", std::string(what) + " does not match the token table");
    }
  };

  const auto tables = m.at("tables").get<std::vector<std::string>>();
  auto has = [&](std::string_view name) {
    return std::find(tables.begin(), tables.end(), name) != tables.end();
  };
  if (has("cosine")) {
    t.cosine = WeightTable{WeightScheme::cosine, r.column<double>("weights.cosine")};
    check_rows(t.cosine->weight.size(), "cosine weights");
  }
  if (has("bm25")) {
    t.bm25 = WeightTable{WeightScheme::bm25, r.column<double>("weights.bm25")};
    check_rows(t.bm25->weight.size(), "bm25 weights");
  }
  if (has("hmm")) {
    t.hmm = WeightTable{WeightScheme::hmm, r.column<double>("weights.hmm")};
    check_rows(t.hmm->weight.size(), "hmm weights");
  }
  if (has("lm")) {
    t.lm = LMModel{r.column<double>("lm.pm"), r.column<double>("lm.cfcs"),
                   r.column<double>("lm.sumcompm")};
    check_rows(t.lm->pm.size(), "lm.pm");
  }
  if (has("edit")) {
    t.edit = EditTables{r.table("edit"), r.column<std::uint32_t>("edit.length")};
  }
  if (has("words")) {
    WordTables words;
    words.corpus = r.corpus("words");
    const auto avg = r.column<double>("words.avg_idf");
    if (avg.size() != 1) {
      fail("format", "bad words.avg_idf");
    }
    words.avg_idf = avg[0];
    words.cosine = WeightTable{WeightScheme::cosine, r.column<double>("words.cosine")};
    words.qgrams = r.table("words.qgrams");
    t.words = std::move(words);
  }
  if (has("minhash")) {
    MinHashTables mh;
    mh.size = m.at("minhash").at("size").get<int>();
    mh.seed = m.at("minhash").at("seed").get<std::uint64_t>();
    mh.signatures = r.column<std::uint64_t>("minhash.signatures");
    if (!t.words || mh.size < 1 ||
        mh.signatures.size() != t.words->corpus.table.vocab.size() * static_cast<std::size_t>(mh.size)) {
      fail("format", "inconsistent min-hash signatures");
    }
    t.minhash = std::move(mh);
  }
  return Index(std::move(t), std::move(info));
}

}  // namespace approxsel
