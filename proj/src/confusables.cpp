#include "idnguard/confusables.hpp"

#include "idnguard/error.hpp"
#include "idnguard/utf8.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace idnguard {

namespace {

struct BuiltinRow {
    char32_t codepoint;
    char latin;
};

// Built-in homoglyph rows. Z, nu and O use the code points matching their glyphs.
constexpr BuiltinRow builtin_rows[] = {
    {0x0391, 'A'}, // Greek capital alpha
    {0x0392, 'B'}, // Greek capital beta
    {0x0396, 'Z'}, // Greek capital zeta
    {0x03BA, 'k'}, // Greek small kappa
    {0x03C5, 'v'}, // Greek small upsilon
    {0x03C9, 'w'}, // Greek small omega
    {0x03B9, 'i'}, // Greek small iota
    {0x03BD, 'v'}, // Greek small nu
    {0x03C7, 'x'}, // Greek small chi
    {0x03B2, 'B'}, // Greek small beta
    {0x03B5, 'E'}, // Greek small epsilon
    {0x0421, 'C'}, // Cyrillic capital es
    {0x041E, 'O'}, // Cyrillic capital o
};

bool is_ascii_letter(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

char32_t parse_codepoint_key(const std::string& key) {
    if (key.size() < 6 || key.size() > 8 || (key[0] != 'U' && key[0] != 'u') || key[1] != '+') {
        throw Error(Errc::InvalidEntry, "key '" + key + "' is not of the form U+XXXX");
    }
    char32_t cp = 0;
    for (std::size_t i = 2; i < key.size(); ++i) {
        const char c = key[i];
        unsigned v;
        if (c >= '0' && c <= '9') {
            v = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v = static_cast<unsigned>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v = static_cast<unsigned>(c - 'A' + 10);
        } else {
            throw Error(Errc::InvalidEntry, "key '" + key + "' has a non-hex digit");
        }
        cp = cp * 16 + v;
    }
    return cp;
}

} // namespace

void ConfusableTable::add(char32_t codepoint, char latin, ConfusableSource source) {
    if (codepoint < 0x80) {
        throw Error(Errc::InvalidEntry, utf8::codepoint_label(codepoint) + " is ASCII");
    }
    if (codepoint > 0x10FFFF || (codepoint >= 0xD800 && codepoint <= 0xDFFF)) {
        throw Error(Errc::InvalidEntry, utf8::codepoint_label(codepoint) + " is not a Unicode scalar value");
    }
    if (!is_ascii_letter(latin)) {
        throw Error(Errc::InvalidEntry, utf8::codepoint_label(codepoint) + " maps to a non-letter");
    }
    if (const auto it = entries_.find(codepoint); it != entries_.end()) {
        if (it->second.latin != latin) {
            throw Error(Errc::InvalidEntry, utf8::codepoint_label(codepoint) + " already maps to '" +
                                                std::string(1, it->second.latin) + "'");
        }
        return;
    }
    entries_.emplace(codepoint, ConfusableEntry{latin, source});
}

const ConfusableEntry* ConfusableTable::find(char32_t codepoint) const {
    const auto it = entries_.find(codepoint);
    return it == entries_.end() ? nullptr : &it->second;
}

ConfusableTable default_confusable_table() {
    ConfusableTable table;
    for (const auto& row : builtin_rows) {
        table.add(row.codepoint, row.latin, ConfusableSource::Builtin);
    }
    return table;
}

ConfusableTable load_confusable_table(std::string_view json_text) {
    ConfusableTable table = default_confusable_table();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::ConfigParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_object()) {
        throw Error(Errc::ConfigParseError, "expected an object with an \"entries\" object");
    }
    for (const auto& [key, value] : doc["entries"].items()) {
        if (!value.is_string() || value.get<std::string>().size() != 1) {
            throw Error(Errc::InvalidEntry, "value for '" + key + "' must be a single letter");
        }
        table.add(parse_codepoint_key(key), value.get<std::string>()[0], ConfusableSource::Extended);
    }
    return table;
}

ConfusableTable load_confusable_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::FileNotFound, path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_confusable_table(buf.str());
}

std::vector<ConfusableHit> find_confusables(const DomainName& domain, const ConfusableTable& table) {
    std::vector<ConfusableHit> hits;
    for (std::size_t li = 0; li < domain.unicode_labels.size(); ++li) {
        const auto cps = utf8::decode(domain.unicode_labels[li]);
        if (!cps) {
            continue;
        }
        for (std::size_t ci = 0; ci < cps->size(); ++ci) {
            if (const auto* entry = table.find((*cps)[ci])) {
                hits.push_back({li, ci, (*cps)[ci], entry->latin});
            }
        }
    }
    return hits;
}

char32_t simple_lowercase(char32_t cp) noexcept {
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 0x20;
    }
    if (cp >= 0x0391 && cp <= 0x03A9 && cp != 0x03A2) {
        return cp + 0x20;
    }
    if (cp >= 0x0410 && cp <= 0x042F) {
        return cp + 0x20;
    }
    if (cp >= 0x0400 && cp <= 0x040F) {
        return cp + 0x50;
    }
    return cp;
}

std::string skeleton(const DomainName& domain, const ConfusableTable& table) {
    auto map_one = [&table](char32_t cp) -> char32_t {
        if (const auto* entry = table.find(cp)) {
            return simple_lowercase(static_cast<char32_t>(entry->latin));
        }
        const char32_t lower = simple_lowercase(cp);
        if (const auto* entry = table.find(lower)) {
            return simple_lowercase(static_cast<char32_t>(entry->latin));
        }
        return lower;
    };

    std::string out;
    for (std::size_t li = 0; li < domain.unicode_labels.size(); ++li) {
        if (li) {
            out.push_back('.');
        }
        const auto& label = domain.unicode_labels[li];
        const auto cps = utf8::decode(label);
        if (!cps) {
            out += label;
            continue;
        }
        for (char32_t cp : *cps) {
            utf8::append(out, map_one(cp));
        }
    }
    return out;
}

} // namespace idnguard
