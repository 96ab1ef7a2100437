#include "idnguard/domain.hpp"

#include "idnguard/error.hpp"
#include "idnguard/punycode.hpp"
#include "idnguard/utf8.hpp"

#include <algorithm>

namespace idnguard {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_ldh(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

// Reduces a URL to its host part; plain domains pass through.
std::string_view host_part(std::string_view s) {
    if (const auto scheme = s.find("://"); scheme != std::string_view::npos) {
        const auto name = s.substr(0, scheme);
        const bool alpha = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
            return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                   c == '+' || c == '-' || c == '.';
        });
        if (alpha) {
            s.remove_prefix(scheme + 3);
        }
    }
    if (const auto end = s.find_first_of("/?#"); end != std::string_view::npos) {
        s = s.substr(0, end);
    }
    if (const auto at = s.rfind('@'); at != std::string_view::npos) {
        s.remove_prefix(at + 1);
    }
    if (const auto colon = s.rfind(':'); colon != std::string_view::npos) {
        const auto port = s.substr(colon + 1);
        if (!port.empty() && std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            s = s.substr(0, colon);
        }
    }
    return s;
}

void check_ldh(std::string_view label, std::string_view context) {
    for (char c : label) {
        if (static_cast<unsigned char>(c) < 0x80 && !is_ldh(c)) {
            throw Error(Errc::InvalidCharacter,
                        "character '" + std::string(1, c) + "' in label '" + std::string(context) + "'");
        }
    }
}

} // namespace

std::string DomainName::ascii() const {
    std::string out;
    for (std::size_t i = 0; i < ascii_labels.size(); ++i) {
        if (i) {
            out.push_back('.');
        }
        out += ascii_labels[i];
    }
    return out;
}

std::string DomainName::unicode() const {
    std::string out;
    for (std::size_t i = 0; i < unicode_labels.size(); ++i) {
        if (i) {
            out.push_back('.');
        }
        out += unicode_labels[i];
    }
    return out;
}

std::size_t DomainName::undecodable_count() const {
    return static_cast<std::size_t>(std::count(undecodable.begin(), undecodable.end(), true));
}

bool DomainName::has_idn_label() const {
    return ascii_labels != unicode_labels;
}

DomainName parse_domain(std::string_view input) {
    DomainName d;
    d.raw = std::string(input);

    std::string_view host = host_part(trim(input));
    if (host.empty()) {
        throw Error(Errc::EmptyInput, "no host in '" + d.raw + "'");
    }
    std::string normalized;
    normalized.reserve(host.size());
    std::transform(host.begin(), host.end(), std::back_inserter(normalized), to_lower_ascii);
    if (!normalized.empty() && normalized.back() == '.') {
        normalized.pop_back();
    }

    std::size_t start = 0;
    while (true) {
        const auto dot = normalized.find('.', start);
        const std::string_view label =
            std::string_view(normalized).substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (label.empty()) {
            throw Error(Errc::EmptyLabel, "in '" + d.raw + "'");
        }

        std::string ascii_label;
        std::string unicode_label;
        bool undecodable = false;
        if (utf8::is_ascii(label)) {
            check_ldh(label, label);
            ascii_label = std::string(label);
            if (punycode::has_ace_prefix(label)) {
                try {
                    unicode_label = punycode::decode_label(label);
                } catch (const Error&) {
                    unicode_label = ascii_label;
                    undecodable = true;
                }
            } else {
                unicode_label = ascii_label;
            }
        } else {
            const auto cps = utf8::decode(label);
            if (!cps) {
                throw Error(Errc::InvalidCharacter, "malformed UTF-8 in '" + d.raw + "'");
            }
            check_ldh(label, label);
            ascii_label = std::string(punycode::ace_prefix) + punycode::encode(*cps);
            unicode_label = std::string(label);
        }

        if (ascii_label.size() > max_label_length) {
            throw Error(Errc::LabelTooLong, "label '" + ascii_label + "' has " +
                                                std::to_string(ascii_label.size()) + " characters");
        }
        d.ascii_labels.push_back(std::move(ascii_label));
        d.unicode_labels.push_back(std::move(unicode_label));
        d.undecodable.push_back(undecodable);

        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }

    const std::size_t total = d.ascii().size();
    if (total > max_name_length) {
        throw Error(Errc::NameTooLong, std::to_string(total) + " characters");
    }
    d.tld = d.ascii_labels.back();
    return d;
}

const std::string& extract_tld(const DomainName& domain) noexcept {
    return domain.tld;
}

std::string_view second_level_label(const DomainName& domain) noexcept {
    if (domain.ascii_labels.size() < 2) {
        return {};
    }
    return domain.ascii_labels[domain.ascii_labels.size() - 2];
}

} // namespace idnguard
