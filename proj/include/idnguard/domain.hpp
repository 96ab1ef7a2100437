#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace idnguard {

inline constexpr std::size_t max_label_length = 63;
inline constexpr std::size_t max_name_length = 253;

/// A parsed, normalized domain name.
///
/// `ascii_labels` hold the lowercase ACE form of every label and
/// `unicode_labels` the decoded (UTF-8) form. Labels that are plain ASCII
/// appear identically in both. A label carrying an "xn--" prefix that does
/// not decode is kept as ASCII in both lists and flagged in `undecodable`.
struct DomainName {
    std::string raw;
    std::vector<std::string> ascii_labels;
    std::vector<std::string> unicode_labels;
    std::string tld;
    std::vector<bool> undecodable;

    std::string ascii() const;
    std::string unicode() const;
    std::size_t undecodable_count() const;
    bool has_idn_label() const;

    friend bool operator==(const DomainName& a, const DomainName& b) {
        return a.ascii_labels == b.ascii_labels && a.unicode_labels == b.unicode_labels &&
               a.undecodable == b.undecodable;
    }
};

/// Parses a domain or URL. Leading/trailing whitespace, a "scheme://"
/// prefix, userinfo, a port and anything from the first '/', '?' or '#'
/// are stripped, then one trailing dot. ASCII is lowercased. Labels given
/// in Unicode are converted to ACE.
///
/// Throws Error with EmptyInput, EmptyLabel, LabelTooLong, NameTooLong or
/// InvalidCharacter.
DomainName parse_domain(std::string_view input);

/// Last ASCII label, lowercase. Multi-label public suffixes are not resolved.
const std::string& extract_tld(const DomainName& domain) noexcept;

/// Second-level label (label before the TLD), or empty for single-label names.
std::string_view second_level_label(const DomainName& domain) noexcept;

} // namespace idnguard
