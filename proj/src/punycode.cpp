#include "idnguard/punycode.hpp"

#include "idnguard/error.hpp"
#include "idnguard/utf8.hpp"

#include <cstdint>
#include <limits>

namespace idnguard::punycode {

namespace {

constexpr std::uint32_t base = 36;
constexpr std::uint32_t tmin = 1;
constexpr std::uint32_t tmax = 26;
constexpr std::uint32_t skew = 38;
constexpr std::uint32_t damp = 700;
constexpr std::uint32_t initial_bias = 72;
constexpr std::uint32_t initial_n = 0x80;
constexpr char delimiter = '-';
constexpr std::uint32_t maxint = std::numeric_limits<std::uint32_t>::max();

std::uint32_t adapt(std::uint32_t delta, std::uint32_t num_points, bool first_time) {
    delta = first_time ? delta / damp : delta / 2;
    delta += delta / num_points;
    std::uint32_t k = 0;
    while (delta > ((base - tmin) * tmax) / 2) {
        delta /= base - tmin;
        k += base;
    }
    return k + (base - tmin + 1) * delta / (delta + skew);
}

std::uint32_t threshold(std::uint32_t k, std::uint32_t bias) {
    if (k <= bias) {
        return tmin;
    }
    if (k >= bias + tmax) {
        return tmax;
    }
    return k - bias;
}

std::uint32_t digit_value(char c) {
    if (c >= '0' && c <= '9') {
        return static_cast<std::uint32_t>(c - '0') + 26;
    }
    if (c >= 'a' && c <= 'z') {
        return static_cast<std::uint32_t>(c - 'a');
    }
    if (c >= 'A' && c <= 'Z') {
        return static_cast<std::uint32_t>(c - 'A');
    }
    return base;
}

char digit_char(std::uint32_t d) {
    return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26));
}

[[noreturn]] void malformed(std::string_view encoded, const char* why) {
    throw Error(Errc::MalformedPunycode, std::string(why) + " in '" + std::string(encoded) + "'");
}

} // namespace

bool has_ace_prefix(std::string_view label) noexcept {
    if (label.size() < ace_prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < ace_prefix.size(); ++i) {
        char c = label[i];
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
        if (c != ace_prefix[i]) {
            return false;
        }
    }
    return true;
}

std::u32string decode(std::string_view encoded) {
    std::u32string output;
    const auto last_delim = encoded.rfind(delimiter);
    std::size_t in = 0;
    if (last_delim != std::string_view::npos) {
        for (std::size_t j = 0; j < last_delim; ++j) {
            const auto c = static_cast<unsigned char>(encoded[j]);
            if (c >= 0x80) {
                malformed(encoded, "non-basic code point before delimiter");
            }
            output.push_back(c);
        }
        in = last_delim + 1;
    }

    std::uint32_t n = initial_n;
    std::uint32_t i = 0;
    std::uint32_t bias = initial_bias;
    while (in < encoded.size()) {
        const std::uint32_t old_i = i;
        std::uint32_t w = 1;
        for (std::uint32_t k = base;; k += base) {
            if (in >= encoded.size()) {
                malformed(encoded, "truncated delta");
            }
            const std::uint32_t digit = digit_value(encoded[in++]);
            if (digit >= base) {
                malformed(encoded, "invalid digit");
            }
            if (digit > (maxint - i) / w) {
                malformed(encoded, "overflow");
            }
            i += digit * w;
            const std::uint32_t t = threshold(k, bias);
            if (digit < t) {
                break;
            }
            if (w > maxint / (base - t)) {
                malformed(encoded, "overflow");
            }
            w *= base - t;
        }
        const auto len = static_cast<std::uint32_t>(output.size() + 1);
        bias = adapt(i - old_i, len, old_i == 0);
        if (i / len > maxint - n) {
            malformed(encoded, "overflow");
        }
        n += i / len;
        i %= len;
        if (n < 0x80 || n > 0x10FFFF || (n >= 0xD800 && n <= 0xDFFF)) {
            malformed(encoded, "decoded value is not a valid non-basic code point");
        }
        output.insert(output.begin() + i, static_cast<char32_t>(n));
        ++i;
    }
    return output;
}

std::string encode(std::u32string_view input) {
    std::string output;
    for (char32_t cp : input) {
        if (cp < 0x80) {
            output.push_back(static_cast<char>(cp));
        }
    }
    const auto basic_count = static_cast<std::uint32_t>(output.size());
    std::uint32_t handled = basic_count;
    if (basic_count > 0) {
        output.push_back(delimiter);
    }

    std::uint32_t n = initial_n;
    std::uint32_t delta = 0;
    std::uint32_t bias = initial_bias;
    const auto total = static_cast<std::uint32_t>(input.size());
    while (handled < total) {
        std::uint32_t m = maxint;
        for (char32_t cp : input) {
            if (cp >= n && cp < m) {
                m = cp;
            }
        }
        if (m - n > (maxint - delta) / (handled + 1)) {
            throw Error(Errc::MalformedPunycode, "overflow while encoding");
        }
        delta += (m - n) * (handled + 1);
        n = m;
        for (char32_t cp : input) {
            if (cp < n) {
                if (++delta == 0) {
                    throw Error(Errc::MalformedPunycode, "overflow while encoding");
                }
            }
            if (cp == n) {
                std::uint32_t q = delta;
                for (std::uint32_t k = base;; k += base) {
                    const std::uint32_t t = threshold(k, bias);
                    if (q < t) {
                        break;
                    }
                    output.push_back(digit_char(t + (q - t) % (base - t)));
                    q = (q - t) / (base - t);
                }
                output.push_back(digit_char(q));
                bias = adapt(delta, handled + 1, handled == basic_count);
                delta = 0;
                ++handled;
            }
        }
        ++delta;
        ++n;
    }
    return output;
}

std::string decode_label(std::string_view label) {
    if (!has_ace_prefix(label)) {
        return std::string(label);
    }
    const auto body = label.substr(ace_prefix.size());
    if (body.empty()) {
        throw Error(Errc::MalformedPunycode, "empty ACE label body");
    }
    return utf8::encode(decode(body));
}

} // namespace idnguard::punycode
