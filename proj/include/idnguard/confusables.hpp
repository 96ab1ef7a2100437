#pragma once

#include "idnguard/domain.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard {

enum class ConfusableSource { Builtin, Extended };

struct ConfusableEntry {
    char latin;
    ConfusableSource source;
};

/// Non-Latin code point -> visually equivalent ASCII letter.
///
/// Keys are never ASCII; values are always ASCII letters. The built-in rows
/// are 13 Greek/Cyrillic homoglyphs; Greek Zeta is U+0396, nu maps to 'v'
/// and Cyrillic O maps to 'O'.
/// Config files may add rows but never remove or change built-in ones.
class ConfusableTable {
public:
    ConfusableTable() = default;

    /// Throws Error{InvalidEntry} if the row violates the table invariants
    /// or conflicts with an existing row.
    void add(char32_t codepoint, char latin, ConfusableSource source);

    const ConfusableEntry* find(char32_t codepoint) const;
    bool contains(char32_t codepoint) const { return find(codepoint) != nullptr; }

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::map<char32_t, ConfusableEntry>& entries() const { return entries_; }

private:
    std::map<char32_t, ConfusableEntry> entries_;
};

struct ConfusableHit {
    std::size_t label_index;
    std::size_t char_index;
    char32_t codepoint;
    char latin_equivalent;

    friend bool operator==(const ConfusableHit&, const ConfusableHit&) = default;
};

ConfusableTable default_confusable_table();

/// Built-ins merged with the rows of a JSON document of the form
/// `{"entries": {"U+0455": "s", ...}}`. Throws ConfigParseError or InvalidEntry.
ConfusableTable load_confusable_table(std::string_view json_text);

/// As above, reading from disk. Throws FileNotFound.
ConfusableTable load_confusable_file(const std::filesystem::path& path);

/// Every occurrence of a table key in the Unicode labels, in label order
/// then character order.
std::vector<ConfusableHit> find_confusables(const DomainName& domain, const ConfusableTable& table);

/// Joined Unicode form with confusables replaced by their Latin letter and
/// everything lowercased.
std::string skeleton(const DomainName& domain, const ConfusableTable& table);

/// Simple case folding for ASCII, Greek and Cyrillic capitals. Other code
/// points are returned unchanged.
char32_t simple_lowercase(char32_t cp) noexcept;

} // namespace idnguard
