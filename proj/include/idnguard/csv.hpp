#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard::csv {

struct Row {
    std::size_t line = 0; // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Records whose first byte is '#' are treated as comments and
/// skipped, as are empty lines. A UTF-8 BOM is ignored.
std::vector<Row> read(std::istream& in);

std::vector<Row> read_file(const std::filesystem::path& path);

/// Quotes a field if it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Index of `name` in a header row (ASCII case-insensitive), or npos.
std::size_t find_column(const std::vector<std::string>& header, std::string_view name);

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

/// One entry per non-empty, non-comment line; trimmed and lowercased.
std::vector<std::string> read_list_file(const std::filesystem::path& path);

} // namespace idnguard::csv
