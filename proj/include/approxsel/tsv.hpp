#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "approxsel/types.hpp"

namespace approxsel {

// Relation files: tid <TAB> string [<TAB> cluster_id], one tuple per line.
// A leading "tid" header line is optional on input and always written.
std::vector<Record> parse_records(std::istream& in, std::string_view source = "<stream>");
std::vector<Record> read_records(const std::filesystem::path& path);
void write_records(std::ostream& out, std::span<const Record> records);
std::string format_records(std::span<const Record> records);

// Two-column TSV (word <TAB> counterpart), '#' comments allowed.
std::vector<std::pair<std::string, std::string>> read_pairs(const std::filesystem::path& path);

// One string per line; blank lines are skipped.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Lets `fill` populate a fresh staging directory, then renames it to `dir`.
// An existing `dir` is an "exists" error unless `overwrite` is set, in which
// case it is swapped out only after `fill` succeeded.
void write_directory_atomic(const std::filesystem::path& dir, bool overwrite,
                            const std::function<void(const std::filesystem::path&)>& fill);

}  // namespace approxsel
