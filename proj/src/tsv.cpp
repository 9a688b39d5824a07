#include "approxsel/tsv.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "approxsel/error.hpp"

namespace approxsel {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos));
    if (tab == std::string_view::npos) {
      return out;
    }
    pos = tab + 1;
  }
}

std::int64_t parse_int(std::string_view field, std::string_view what, std::string_view where) {
  std::int64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    fail("parse", std::string(where) + ": " + std::string(what) + " is not an integer: '" +
                      std::string(field) + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail("io", "cannot open " + path.string());
  }
  return in;
}

std::filesystem::path temp_sibling(const std::filesystem::path& path, std::string_view tag) {
  std::random_device rd;
  auto out = path;
  out += "." + std::string(tag) + "-" + std::to_string(rd());
  return out;
}

}  // namespace

std::vector<Record> parse_records(std::istream& in, std::string_view source) {
  std::vector<Record> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto fields = split_tabs(line);
    if (lineno == 1 && fields[0] == "tid") {
      continue;
    }
    const auto where = std::string(source) + ":" + std::to_string(lineno);
    if (fields.size() < 2 || fields.size() > 3) {
      fail("parse", where + ": expected 2 or 3 tab-separated columns");
    }
    Record r;
    r.tid = parse_int(fields[0], "tid", where);
    r.text = std::string(fields[1]);
    if (fields.size() == 3 && !fields[2].empty()) {
      r.cluster_id = parse_int(fields[2], "cluster_id", where);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Record> read_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_records(in, path.string());
}

void write_records(std::ostream& out, std::span<const Record> records) {
  bool clusters = false;
  for (const auto& r : records) {
    clusters = clusters || r.cluster_id.has_value();
  }
  out << (clusters ? "tid\tstring\tcluster_id\n" : "tid\tstring\n");
  for (const auto& r : records) {
    if (r.text.find_first_of("\t\n\r") != std::string::npos) {
      fail("invalid_argument", "tuple " + std::to_string(r.tid) + " contains a tab or newline");
    }
    out << r.tid << '\t' << r.text;
    if (clusters) {
      out << '\t';
      if (r.cluster_id) {
        out << *r.cluster_id;
      }
    }
    out << '\n';
  }
}

std::string format_records(std::span<const Record> records) {
  std::ostringstream out;
  write_records(out, records);
  return out.str();
}

std::vector<std::pair<std::string, std::string>> read_pairs(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') {
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      fail("parse", path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    out.emplace_back(fields[0], fields[1]);
  }
  return out;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!line.empty()) {
      out.push_back(line);
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto tmp = temp_sibling(path, "tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      fail("io", "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail("io", "cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

void write_directory_atomic(const std::filesystem::path& dir, bool overwrite,
                            const std::function<void(const std::filesystem::path&)>& fill) {
  namespace fs = std::filesystem;
  if (fs::exists(dir) && !overwrite) {
    fail("exists", "output directory already exists: " + dir.string());
  }
  const auto tmp = temp_sibling(dir.has_filename() ? dir : dir.parent_path(), "tmp");
  try {
    fs::create_directories(tmp);
    fill(tmp);
  } catch (const fs::filesystem_error& e) {
    fs::remove_all(tmp);
    fail("io", e.what());
  } catch (...) {
    fs::remove_all(tmp);
    throw;
  }
  std::error_code ec;
  if (fs::exists(dir)) {
    const auto old = temp_sibling(dir, "old");
    fs::rename(dir, old, ec);
    if (!ec) {
      fs::rename(tmp, dir, ec);
      fs::remove_all(old);
    }
  } else {
    fs::rename(tmp, dir, ec);
  }
  if (ec) {
    fs::remove_all(tmp);
    fail("io", "cannot move output into place at " + dir.string() + ": " + ec.message());
  }
}

}  // namespace approxsel
