#include "idnguard/csv.hpp"

#include "idnguard/error.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace idnguard::csv {

namespace {

char lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

} // namespace

std::vector<Row> read(std::istream& in) {
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) {
        text.erase(0, 3);
    }

    std::vector<Row> rows;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (text[i] == '\n' || text[i] == '\r') {
            if (text[i] == '\n') {
                ++line;
            }
            ++i;
            continue;
        }
        if (text[i] == '#') {
            while (i < n && text[i] != '\n') {
                ++i;
            }
            continue;
        }

        Row row;
        row.line = line;
        std::string field;
        bool quoted = false;
        bool field_started_quoted = false;
        while (i < n) {
            const char c = text[i];
            if (quoted) {
                if (c == '"') {
                    if (i + 1 < n && text[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        quoted = false;
                        ++i;
                    }
                } else {
                    if (c == '\n') {
                        ++line;
                    }
                    field.push_back(c);
                    ++i;
                }
                continue;
            }
            if (c == '"' && field.empty() && !field_started_quoted) {
                quoted = true;
                field_started_quoted = true;
                ++i;
            } else if (c == ',') {
                row.fields.push_back(std::move(field));
                field.clear();
                field_started_quoted = false;
                ++i;
            } else if (c == '\r' || c == '\n') {
                break;
            } else {
                field.push_back(c);
                ++i;
            }
        }
        row.fields.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileNotFound, path.string());
    }
    return read(in);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::size_t find_column(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& h = header[i];
        if (h.size() == name.size() &&
            std::equal(h.begin(), h.end(), name.begin(), [](char a, char b) { return lower(a) == lower(b); })) {
            return i;
        }
    }
    return npos;
}

std::vector<std::string> read_list_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileNotFound, path.string());
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r\n");
        std::string entry = line.substr(first, last - first + 1);
        std::transform(entry.begin(), entry.end(), entry.begin(), lower);
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace idnguard::csv
