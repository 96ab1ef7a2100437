#pragma once

#include <string>
#include <string_view>

namespace idnguard::punycode {

inline constexpr std::string_view ace_prefix = "xn--";

/// True when `label` starts with "xn--", ignoring case.
bool has_ace_prefix(std::string_view label) noexcept;

/// Bootstring decode of the part after the ACE prefix. Throws
/// Error{MalformedPunycode} on invalid digits, overflow or code points
/// outside the Unicode scalar range.
std::u32string decode(std::string_view encoded);

/// Bootstring encode; inverse of decode().
std::string encode(std::u32string_view input);

/// Decodes an "xn--" label into UTF-8. Labels without the prefix are
/// returned unchanged.
std::string decode_label(std::string_view label);

} // namespace idnguard::punycode
