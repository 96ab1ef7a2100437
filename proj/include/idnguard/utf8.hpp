#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace idnguard::utf8 {

/// Decodes UTF-8 into code points. Returns nullopt on malformed input
/// (overlongs, surrogates, truncated sequences, values above U+10FFFF).
std::optional<std::u32string> decode(std::string_view bytes);

std::string encode(std::u32string_view code_points);

void append(std::string& out, char32_t cp);

bool is_ascii(std::string_view bytes) noexcept;

/// "U+0421" style rendering.
std::string codepoint_label(char32_t cp);

} // namespace idnguard::utf8
